#include "shellres/regular_solution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "shellres/error.hpp"

namespace shellres {
namespace {

// Below this |Q| (b - a) the j1/j2 split loses digits to the 1/Q factor.
constexpr double kSmallBarrierPhase = 1e-3;

// sin(x)/x, stable near zero.
Complex sinc(Complex x) {
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

bool small_barrier_phase(const MatchingCoefficients& c) {
  return std::abs(c.q) * (c.pot.b() - c.pot.a()) < kSmallBarrierPhase;
}

}  // namespace

MatchingCoefficients solve_matching(ComplexMomentum k, const ShellPotential& pot,
                                    QBranch branch) {
  if (k.value == Complex{}) throw DegenerateMomentumError();

  const double a = pot.a();
  const double b = pot.b();
  const double width = b - a;
  const Complex kk = k.value;
  const Complex q = interior_momentum(k, pot, branch);

  MatchingCoefficients c{.j1 = {}, .j2 = {}, .j3 = {}, .j4 = {}, .k = k, .q = q,
                         .value_at_a = std::sin(kk * a),
                         .slope_at_a = kk * std::cos(kk * a), .pot = pot};

  if (std::abs(q) * width >= kSmallBarrierPhase) {
    const Complex ratio = c.slope_at_a / (kI * q);
    c.j1 = 0.5 * std::exp(-kI * q * a) * (c.value_at_a + ratio);
    c.j2 = 0.5 * std::exp(kI * q * a) * (c.value_at_a - ratio);
  } else {
    // The exponential split is ill-conditioned here; j1, j2 are still
    // reported but evaluation switches to the cos/sinc form.
    const Complex safe_q = q == Complex{} ? Complex{1e-300, 0.0} : q;
    const Complex ratio = c.slope_at_a / (kI * safe_q);
    c.j1 = 0.5 * std::exp(-kI * q * a) * (c.value_at_a + ratio);
    c.j2 = 0.5 * std::exp(kI * q * a) * (c.value_at_a - ratio);
  }

  // Propagate across the barrier with forms that are even in Q.
  const Complex phase = q * width;
  const Complex value_b =
      c.value_at_a * std::cos(phase) + c.slope_at_a * width * sinc(phase);
  const Complex slope_b =
      -c.value_at_a * q * q * width * sinc(phase) + c.slope_at_a * std::cos(phase);

  const Complex ratio_b = slope_b / (kI * kk);
  c.j3 = 0.5 * std::exp(-kI * kk * b) * (value_b + ratio_b);
  c.j4 = 0.5 * std::exp(kI * kk * b) * (value_b - ratio_b);
  return c;
}

Complex eval_chi(double r, const MatchingCoefficients& c) {
  if (!(r >= 0.0)) throw InvalidArgument("eval_chi: radius must be non-negative");
  const Complex k = c.k.value;
  if (r < c.pot.a()) return std::sin(k * r);
  if (r < c.pot.b()) {
    if (small_barrier_phase(c)) {
      const double x = r - c.pot.a();
      return c.value_at_a * std::cos(c.q * x) + c.slope_at_a * x * sinc(c.q * x);
    }
    return c.j1 * std::exp(kI * c.q * r) + c.j2 * std::exp(-kI * c.q * r);
  }
  return c.j3 * std::exp(kI * k * r) + c.j4 * std::exp(-kI * k * r);
}

Complex eval_chi(double r, ComplexMomentum k, const ShellPotential& pot) {
  return eval_chi(r, solve_matching(k, pot));
}

Complex eval_chi_derivative(double r, const MatchingCoefficients& c) {
  const Complex k = c.k.value;
  if (r < c.pot.a()) return k * std::cos(k * r);
  if (r < c.pot.b()) {
    if (small_barrier_phase(c)) {
      const double x = r - c.pot.a();
      return -c.value_at_a * c.q * c.q * x * sinc(c.q * x) +
             c.slope_at_a * std::cos(c.q * x);
    }
    return kI * c.q *
           (c.j1 * std::exp(kI * c.q * r) - c.j2 * std::exp(-kI * c.q * r));
  }
  return kI * k * (c.j3 * std::exp(kI * k * r) - c.j4 * std::exp(-kI * k * r));
}

JostPair jost(const MatchingCoefficients& c) {
  return {.plus = -2.0 * kI * c.j4, .minus = 2.0 * kI * c.j3, .k = c.k};
}

JostPair jost(ComplexMomentum k, const ShellPotential& pot) {
  return jost(solve_matching(k, pot));
}

double schrodinger_residual(double r, ComplexMomentum k, const ShellPotential& pot,
                            double h) {
  const MatchingCoefficients c = solve_matching(k, pot);
  if (h <= 0.0) {
    const double wavenumber = (r > pot.a() && r < pot.b()) ? std::abs(c.q) : std::abs(k.value);
    h = 3e-4 / std::max(1.0, wavenumber);
  }
  const Complex center = eval_chi(r, c);
  const Complex second =
      (eval_chi(r + h, c) - 2.0 * center + eval_chi(r - h, c)) / (h * h);
  const Complex energy = momentum_to_energy(k, pot.units());
  const double kinetic = 1.0 / pot.units().c0();
  return std::abs(-kinetic * second + (pot(r) - energy) * center);
}

std::size_t CoefficientCache::KeyHash::operator()(const Key& key) const noexcept {
  const std::size_t h1 = std::hash<double>{}(key.re);
  const std::size_t h2 = std::hash<double>{}(key.im);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

MatchingCoefficients CoefficientCache::get(ComplexMomentum k) const {
  const Key key{k.real(), k.imag()};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  MatchingCoefficients fresh = solve_matching(k, pot_);
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(key, fresh).first->second;
}

std::size_t CoefficientCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace shellres
