#include "shellres/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exp_integrals.hpp"
#include "parallel.hpp"
#include "shellres/error.hpp"
#include "shellres/quadrature.hpp"

namespace shellres {
namespace {

// Uniform sub-breaks so each initial panel spans about half an oscillation.
void append_panels(std::vector<double>& breaks, double lo, double hi, double rate) {
  if (!(hi > lo)) return;
  const int n = 1 + static_cast<int>(std::ceil((hi - lo) * rate / kPi));
  for (int i = 1; i <= n; ++i) {
    breaks.push_back(i == n ? hi : lo + (hi - lo) * (double(i) / n));
  }
}

Complex exterior_tail_exp_decay(const TestFunction& f, const MatchingCoefficients& c) {
  const double alpha = f.parameter();
  const Complex k = c.k.value;
  const double b = c.pot.b();
  Complex acc{};
  const auto& coeffs = f.coefficients();
  for (int n = 0; n < static_cast<int>(coeffs.size()); ++n) {
    if (coeffs[n] == 0.0) continue;
    acc += coeffs[n] *
           (c.j3 * detail::exp_poly_integral(n, alpha - kI * k, b,
                                             std::numeric_limits<double>::infinity()) +
            c.j4 * detail::exp_poly_integral(n, alpha + kI * k, b,
                                             std::numeric_limits<double>::infinity()));
  }
  return acc;
}

// Factor multiplying conj(int chi f) on the real axis, i.e. conj of the
// eigenfunction normalization.
Complex real_axis_prefactor(EigenfunctionKind kind, double energy, const JostPair& j,
                            const UnitSystem& units) {
  const double rho = spectral_density(energy, units);
  switch (kind) {
    case EigenfunctionKind::sw:
      return std::sqrt(rho) / std::abs(j.plus);
    case EigenfunctionKind::plus:
      return std::sqrt(rho) / std::conj(j.plus);
    case EigenfunctionKind::minus:
      return std::sqrt(rho) / std::conj(j.minus);
  }
  return {};
}

Complex continued_prefactor(EigenfunctionKind kind, Complex k, const JostPair& j,
                            const UnitSystem& units) {
  const Complex rho = units.c0() / (kPi * k);
  switch (kind) {
    case EigenfunctionKind::sw:
      return std::sqrt(rho / (j.plus * j.minus));
    case EigenfunctionKind::plus:
      return std::sqrt(rho) / j.minus;
    case EigenfunctionKind::minus:
      return std::sqrt(rho) / j.plus;
  }
  return {};
}

double momentum_of(double energy, const UnitSystem& units) {
  return std::sqrt(units.c0() * energy);
}

void require_spectrum(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw OutOfSpectrumError(energy);
}

// Real-axis value of (U f)(E) at momentum k > 0 with overlap tolerance tol.
struct PointValue {
  Complex value;
  double error;
  bool converged;
};

PointValue transform_point(EigenfunctionKind kind, const TestFunction& f,
                           const MatchingCoefficients& c, double energy, double tol) {
  const JostPair j = jost(c);
  const Complex pref = real_axis_prefactor(kind, energy, j, c.pot.units());
  const double scale = std::max(std::abs(pref), 1e-300);
  OverlapOptions opts;
  opts.abs_tol = tol / scale;
  const OverlapResult ov = radial_overlap(f, c, opts);
  return {pref * std::conj(ov.value), ov.error * scale, ov.converged};
}

// Breakpoints around narrow resonances close to the positive real axis, where
// 1/|J+|^2 has peaks far thinner than any oscillation-based panel.
std::vector<double> narrow_resonance_breaks(const ShellPotential& pot, double k_max) {
  std::vector<double> out;
  const double k_scan =
      std::min(k_max, std::max(10.0, 4.0 * std::sqrt(pot.units().c0() * std::abs(pot.v0()))));
  const double step = 5e-3;
  const int n = static_cast<int>(k_scan / step);
  std::vector<double> mag(n + 1);
  for (int i = 1; i <= n; ++i) {
    mag[i] = std::abs(jost(ComplexMomentum(i * step, 0.0), pot).plus);
  }
  for (int i = 2; i < n; ++i) {
    if (!(mag[i] < mag[i - 1] && mag[i] <= mag[i + 1])) continue;
    try {
      const Resonance res =
          refine_zero(JostBranch::plus, Complex(i * step, -1e-3), pot, ZeroSearchOptions{});
      const double re = res.k_pole.real();
      const double width = std::abs(res.k_pole.imag());
      if (!(re > 0.0) || width > 0.05 * std::max(1.0, re) || width == 0.0) continue;
      for (double m : {-30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0}) {
        const double x = re + m * width;
        if (x > 0.0 && x < k_max) out.push_back(x);
      }
    } catch (const Error&) {
      // Not every real-axis dip hides a nearby zero.
    }
  }
  return out;
}

}  // namespace

double spectral_density(double energy, const UnitSystem& units) {
  require_spectrum(energy);
  return units.c0() / (kPi * momentum_of(energy, units));
}

double spectral_density_sw(double energy, const ShellPotential& pot) {
  const double k = momentum_of(energy, pot.units());
  const double jp = std::abs(jost(ComplexMomentum(k, 0.0), pot).plus);
  return spectral_density(energy, pot.units()) / (jp * jp);
}

Complex eval_eigenfunction(EigenfunctionKind kind, double r, double energy,
                           const ShellPotential& pot) {
  require_spectrum(energy);
  if (!(r >= 0.0)) throw InvalidArgument("eigenfunction: r must be nonnegative");
  const double k = momentum_of(energy, pot.units());
  const MatchingCoefficients c = solve_matching(ComplexMomentum(k, 0.0), pot);
  const JostPair j = jost(c);
  const double rho = spectral_density(energy, pot.units());
  const Complex chi = eval_chi(r, c);
  switch (kind) {
    case EigenfunctionKind::sw:
      return std::sqrt(rho) / std::abs(j.plus) * chi;
    case EigenfunctionKind::plus:
      return std::sqrt(rho) * chi / j.plus;
    case EigenfunctionKind::minus:
      return std::sqrt(rho) * chi / j.minus;
  }
  return {};
}

OverlapResult radial_overlap(const TestFunction& f, const MatchingCoefficients& c,
                             const OverlapOptions& opts) {
  if (f.is_zero()) return {};
  const Complex k = c.k.value;
  const double growth = std::abs(k.imag());
  const DecayClass decay = f.decay_class();
  if (decay.kind == DecayKind::exponential && !(decay.rate > growth)) {
    throw DivergenceError(decay.rate, growth);
  }

  const double a = c.pot.a();
  const double b = c.pot.b();
  double end = b;
  switch (decay.kind) {
    case DecayKind::exponential: end = b; break;
    case DecayKind::super_exponential: end = std::max(b, f.effective_extent(growth)); break;
    case DecayKind::compact: end = decay.support; break;
  }

  const double k_rate = std::abs(k);
  const double q_rate = std::abs(c.q);
  std::vector<double> breaks{0.0};
  append_panels(breaks, 0.0, std::min(a, end), k_rate);
  append_panels(breaks, a, std::min(b, end), q_rate);
  if (end > b) {
    const double env_rate = decay.kind == DecayKind::super_exponential
                                ? kPi / f.parameter()
                                : 0.0;
    append_panels(breaks, b, end, k_rate + env_rate);
  }

  quadrature::Options qopts;
  qopts.abs_tol = opts.abs_tol;
  qopts.rel_tol = opts.rel_tol;
  qopts.max_panels = opts.max_panels;
  const auto res = quadrature::integrate(
      [&](double r) { return eval_chi(r, c) * f(r); }, std::span<const double>(breaks),
      qopts);

  OverlapResult out{res.value, res.error, res.converged};
  if (decay.kind == DecayKind::exponential) out.value += exterior_tail_exp_decay(f, c);
  return out;
}

TransformSample transform(EigenfunctionKind kind, const TestFunction& f,
                          std::span<const double> energies, const CoefficientCache& cache,
                          double tol, int jobs) {
  for (double e : energies) require_spectrum(e);
  TransformSample out;
  out.kind = kind;
  out.energies.assign(energies.begin(), energies.end());
  out.values.resize(energies.size());
  out.errors.resize(energies.size());
  std::vector<char> converged(energies.size(), 1);
  const UnitSystem& units = cache.potential().units();

  detail::parallel_for(energies.size(), jobs, [&](std::size_t i) {
    const double k = momentum_of(energies[i], units);
    const MatchingCoefficients c = cache.get(ComplexMomentum(k, 0.0));
    const PointValue p = transform_point(kind, f, c, energies[i], tol);
    out.values[i] = p.value;
    out.errors[i] = p.error;
    converged[i] = p.converged ? 1 : 0;
  });

  for (std::size_t i = 0; i < energies.size(); ++i) {
    out.quadrature_error = std::max(out.quadrature_error, out.errors[i]);
    if (!converged[i] && out.errors[i] > tol) throw QuadratureError(out.errors[i], tol);
  }
  return out;
}

TransformSample transform(EigenfunctionKind kind, const TestFunction& f,
                          std::span<const double> energies, const ShellPotential& pot,
                          double tol, int jobs) {
  const CoefficientCache cache(pot);
  return transform(kind, f, energies, cache, tol, jobs);
}

ParsevalReport parseval_check(EigenfunctionKind kind, const TestFunction& f,
                              const ShellPotential& pot, const ParsevalOptions& opts) {
  ParsevalReport report;
  report.kind = kind;
  report.norm_f2 = f.norm_squared();
  if (!(report.norm_f2 > 0.0)) {
    throw InvalidArgument("parseval_check: test function has zero norm");
  }
  const double scale = std::sqrt(report.norm_f2);
  const UnitSystem& units = pot.units();

  // |(U f)(E(k))|^2 dE/dk
  auto density = [&](double k) -> Complex {
    const double energy = k * k / units.c0();
    const MatchingCoefficients c = solve_matching(ComplexMomentum(k, 0.0), pot);
    const PointValue p = transform_point(kind, f, c, energy, 1e-3 * opts.quad_rel_tol * scale);
    return std::norm(p.value) * 2.0 * k / units.c0();
  };

  // Interference between the shell edges and the support of f sets the
  // oscillation scale of the density in k.
  const double extent = std::min(f.effective_extent(0.0), 4.0 * pot.b());
  const double length = std::max(pot.b(), extent);
  const std::vector<double> resonance_breaks =
      narrow_resonance_breaks(pot, opts.k_cut_max);

  auto segment = [&](double lo, double hi) {
    std::vector<double> breaks;
    const int n = 4 + static_cast<int>(std::ceil((hi - lo) * length / kPi));
    for (int i = 0; i <= n; ++i) breaks.push_back(lo + (hi - lo) * (double(i) / n));
    for (double x : resonance_breaks) {
      if (x > lo && x < hi) breaks.push_back(x);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.back() = hi;
    quadrature::Options q;
    q.abs_tol = opts.quad_rel_tol * report.norm_f2;
    q.max_panels = 200000;
    return quadrature::integrate(density, std::span<const double>(breaks), q);
  };

  const double f0 = f.value_at_origin();
  const double tail_coeff = 2.0 / kPi * f0 * f0;

  double k_cut = opts.k_cut_start;
  auto head = segment(0.0, k_cut);
  double integral = head.value.real();
  double quad_err = head.error;
  for (;;) {
    const double next = 2.0 * k_cut;
    const auto piece = segment(k_cut, next);
    integral += piece.value.real();
    quad_err += piece.error;
    const double predicted = tail_coeff * (1.0 / k_cut - 1.0 / next);
    report.tail_bound = std::abs(piece.value.real() - predicted);
    k_cut = next;
    if (report.tail_bound <= 0.5 * opts.tolerance * report.norm_f2 ||
        k_cut >= opts.k_cut_max) {
      break;
    }
  }

  report.cutoff_momentum = k_cut;
  report.cutoff_energy = k_cut * k_cut / units.c0();
  report.tail_estimate = tail_coeff / k_cut;
  report.quadrature_error = quad_err;
  report.norm_uf2 = integral + report.tail_estimate;
  report.deviation = std::abs(report.norm_uf2 - report.norm_f2) / report.norm_f2;
  if (report.tail_bound > opts.tolerance * report.norm_f2 ||
      quad_err > opts.tolerance * report.norm_f2) {
    report.status = CheckStatus::inconclusive;
  }
  return report;
}

ContinuationValue continue_transform(EigenfunctionKind kind, const TestFunction& f,
                                     ComplexMomentum k, const ShellPotential& pot,
                                     std::span<const Resonance> zero_table,
                                     const ContinuationOptions& opts) {
  const MatchingCoefficients c = solve_matching(k, pot);
  const JostPair j = jost(c);
  OverlapOptions oopts;
  oopts.abs_tol = 0.0;
  oopts.rel_tol = opts.rel_tol;
  const OverlapResult ov = radial_overlap(f, c, oopts);

  ContinuationValue out;
  out.k = k;
  out.prefactor = continued_prefactor(kind, k.value, j, pot.units());
  out.overlap = ov.value;
  out.value = out.prefactor * ov.value;
  out.quadrature_error = std::abs(out.prefactor) * ov.error;
  if (!zero_table.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : zero_table) best = std::min(best, std::abs(z.k_pole.value - k.value));
    out.nearest_zero_distance = best;
  }
  return out;
}

ContinuationValue continue_transform_sw(const TestFunction& f, ComplexMomentum k,
                                        const ShellPotential& pot,
                                        std::span<const Resonance> zero_table,
                                        const ContinuationOptions& opts) {
  return continue_transform(EigenfunctionKind::sw, f, k, pot, zero_table, opts);
}

TransformSample evolve_energy_rep(const TransformSample& sample, double t) {
  TransformSample out = sample;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] *= std::exp(Complex(0.0, -out.energies[i] * t));
  }
  return out;
}

std::vector<double> standard_real_axis_energies(const UnitSystem& units, int count,
                                                double k_max) {
  std::vector<double> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double k = k_max * (j + 1) / count;
    out.push_back(k * k / units.c0());
  }
  return out;
}

const char* to_string(EigenfunctionKind kind) {
  switch (kind) {
    case EigenfunctionKind::sw: return "sw";
    case EigenfunctionKind::plus: return "plus";
    case EigenfunctionKind::minus: return "minus";
  }
  return "?";
}

const char* to_string(CheckStatus status) {
  return status == CheckStatus::ok ? "ok" : "inconclusive";
}

}  // namespace shellres
