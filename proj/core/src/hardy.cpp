#include "shellres/hardy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <mutex>

#include "exp_integrals.hpp"
#include "shellres/error.hpp"
#include "shellres/quadrature.hpp"

namespace shellres {
namespace {

constexpr double kWindowDivisor = 6.5;
constexpr double kGuardSigmas = 6.0;
constexpr double kEdgeLimit = 1e-8;

// FFTW's planner is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

std::vector<Complex> forward_dft(std::span<const Complex> in) {
  const int n = static_cast<int>(in.size());
  std::unique_ptr<fftw_complex[], FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int i = 0; i < n; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_execute(plan);
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[i] = {buf[i][0], buf[i][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<double> hardy_grid(double e_max, int points) {
  if (!(e_max > 0.0) || points < 2) {
    throw InvalidArgument("hardy grid: requires e_max > 0 and at least two points");
  }
  std::vector<double> grid(points);
  const double step = 2.0 * e_max / points;
  for (int j = 0; j < points; ++j) grid[j] = -e_max + step * j;
  return grid;
}

HardyVerdict classify_hardy(std::span<const Complex> samples, double e_max,
                            double threshold) {
  const int n = static_cast<int>(samples.size());
  if (n < 1024) throw InvalidArgument("classify_hardy: needs at least 1024 samples");
  if (!(threshold > 0.0 && threshold < 0.5)) {
    throw InvalidArgument("classify_hardy: threshold must lie in (0, 0.5)");
  }
  const std::vector<double> grid = hardy_grid(e_max, n);
  const double sigma = e_max / kWindowDivisor;

  std::vector<Complex> windowed(n);
  double peak = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag())) {
      throw InvalidArgument("classify_hardy: samples must be finite");
    }
    const double e = grid[j];
    windowed[j] = samples[j] * std::exp(-e * e / (2.0 * sigma * sigma));
    peak = std::max(peak, std::abs(windowed[j]));
  }

  HardyVerdict v;
  v.threshold = threshold;
  v.guard_time = kGuardSigmas / sigma;
  if (peak == 0.0) {
    v.status = CheckStatus::inconclusive;
    return v;
  }
  v.edge_magnitude = std::max(std::abs(windowed.front()), std::abs(windowed.back())) / peak;

  const std::vector<Complex> spectrum = forward_dft(windowed);
  const double step = 2.0 * e_max / n;
  double negative = 0.0;
  double positive = 0.0;
  for (int m = 0; m < n; ++m) {
    const int signed_m = m < n / 2 ? m : m - n;
    const double t = 2.0 * kPi * signed_m / (n * step);
    const double power = std::norm(spectrum[m]);
    if (t < -v.guard_time) negative += power;
    if (t > v.guard_time) positive += power;
  }
  const double total = negative + positive;
  if (!(total > 0.0)) {
    v.status = CheckStatus::inconclusive;
    return v;
  }
  v.negative_time_fraction = negative / total;
  v.positive_time_fraction = positive / total;
  if (v.negative_time_fraction < threshold) {
    v.cls = HardyClass::upper;
  } else if (v.positive_time_fraction < threshold) {
    v.cls = HardyClass::lower;
  } else {
    v.cls = HardyClass::neither;
  }
  if (v.edge_magnitude > kEdgeLimit) v.status = CheckStatus::inconclusive;
  return v;
}

ArcProbeReport arc_growth_probe(EigenfunctionKind kind, const TestFunction& f,
                                double ray_angle, std::span<const double> radii,
                                const ShellPotential& pot) {
  if (f.decay_class().kind != DecayKind::compact) {
    throw InvalidArgument("arc_growth_probe: test function must have compact support");
  }
  if (std::abs(std::sin(ray_angle)) < std::sin(kPi / 16.0) - 1e-12) {
    throw InvalidArgument("arc_growth_probe: ray must stay pi/16 away from the real axis");
  }
  if (radii.empty()) throw InvalidArgument("arc_growth_probe: no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw InvalidArgument("arc_growth_probe: radii must be positive and strictly increasing");
    }
  }

  ArcProbeReport report;
  report.kind = kind;
  report.ray_angle = ray_angle;
  report.radii.assign(radii.begin(), radii.end());
  const Complex direction = std::polar(1.0, ray_angle);
  for (double r : radii) {
    const auto value = continue_transform(kind, f, ComplexMomentum(r * direction), pot);
    report.magnitudes.push_back(std::abs(value.value));
  }
  const double first = report.magnitudes.front();
  const double last = report.magnitudes.back();
  if (first == 0.0) {
    report.growth_ratio = last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    report.growth_ratio = last / first;
  }
  return report;
}

GamowState GamowState::from_resonance(const Resonance& res, const ShellPotential& pot) {
  if (res.which != JostBranch::plus || !(res.k_pole.imag() < 0.0)) {
    throw InvalidArgument("Gamow state: needs a zero of J+ in the lower half-plane");
  }
  const MatchingCoefficients c = solve_matching(res.k_pole, pot);
  if (!(std::abs(c.j4) < 1e-10)) {
    throw InvalidArgument("Gamow state: incoming amplitude |j4| is not below 1e-10");
  }
  return GamowState(res, c);
}

PairingReport gamow_pair(const TestFunction& f, const GamowState& state,
                         std::span<const double> r_limits) {
  if (r_limits.size() < 3) {
    throw InvalidArgument("gamow_pair: needs at least three integration limits");
  }
  for (std::size_t i = 0; i < r_limits.size(); ++i) {
    if (!(r_limits[i] > 0.0) || (i > 0 && !(r_limits[i] > r_limits[i - 1]))) {
      throw InvalidArgument("gamow_pair: limits must be positive and strictly increasing");
    }
  }

  const MatchingCoefficients& c = state.coefficients();
  const double a = c.pot.a();
  const double b = c.pot.b();
  const DecayClass decay = f.decay_class();
  const double support_end =
      decay.kind == DecayKind::compact ? decay.support : std::numeric_limits<double>::infinity();
  const Complex k = c.k.value;

  quadrature::Options qopts;
  qopts.abs_tol = 0.0;
  qopts.rel_tol = 1e-13;
  auto integrand = [&](double r) { return f(r) * state(r); };

  auto closed_form = [&](double lo, double hi) {
    const double alpha = f.parameter();
    Complex acc{};
    for (int n = 0; n <= f.degree(); ++n) {
      const double cn = f.coefficients()[n];
      if (cn == 0.0) continue;
      acc += cn * (c.j3 * detail::exp_poly_integral(n, alpha - kI * k, lo, hi) +
                   c.j4 * detail::exp_poly_integral(n, alpha + kI * k, lo, hi));
    }
    return acc;
  };

  // int_lo^hi conj(phi) u dr, splitting at the shell edges.
  auto piece = [&](double lo, double hi) -> Complex {
    hi = std::min(hi, support_end);
    if (!(hi > lo)) return {};
    std::vector<double> cuts{lo};
    for (double x : {a, b}) {
      if (x > lo && x < hi) cuts.push_back(x);
    }
    cuts.push_back(hi);
    Complex acc{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double s = cuts[i];
      const double e = cuts[i + 1];
      if (s >= b && decay.kind == DecayKind::exponential) {
        acc += closed_form(s, e);
        continue;
      }
      const double rate = std::abs(s < a ? k : (s < b ? c.q : k));
      quadrature::Options local = qopts;
      local.initial_panels = 1 + static_cast<int>(std::ceil((e - s) * rate / kPi));
      acc += quadrature::integrate(integrand, s, e, local).value;
    }
    return acc;
  };

  PairingReport report;
  report.r_limits.assign(r_limits.begin(), r_limits.end());
  Complex running{};
  double prev = 0.0;
  for (double r : r_limits) {
    running += piece(prev, r);
    report.partial.push_back(running);
    prev = r;
  }
  if (decay.kind == DecayKind::exponential) {
    report.expected_exponent = state.growth_rate() - decay.rate;
  }

  const std::size_t n = report.partial.size();
  double scale = 0.0;
  for (const auto& p : report.partial) scale = std::max(scale, std::abs(p));
  std::vector<double> xs;
  std::vector<double> ys;
  bool settled = true;
  for (std::size_t j = 1; j < n; ++j) {
    const double d = std::abs(report.partial[j] - report.partial[j - 1]);
    if (j >= n / 2 && d > 1e-15 * scale) settled = false;
    if (d > 0.0) {
      xs.push_back(0.5 * (report.r_limits[j] + report.r_limits[j - 1]));
      ys.push_back(std::log(d));
    }
  }
  if (settled || xs.size() < 2) {
    report.verdict = PairingVerdict::converged;
    report.limit = report.partial.back();
    report.measured_exponent = -std::numeric_limits<double>::infinity();
    return report;
  }

  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  report.measured_exponent = sxy / sxx;

  if (report.measured_exponent < 0.0) {
    report.verdict = PairingVerdict::converged;
    const Complex d_last = report.partial[n - 1] - report.partial[n - 2];
    const Complex d_prev = report.partial[n - 2] - report.partial[n - 3];
    Complex limit = report.partial.back();
    if (d_prev != Complex{}) {
      const Complex q = d_last / d_prev;
      if (std::abs(q) < 1.0) limit += d_last * q / (1.0 - q);
    }
    report.limit = limit;
  } else {
    report.verdict = PairingVerdict::diverged;
  }
  return report;
}

std::vector<double> uniform_limits(double start, double step, int count) {
  if (!(step > 0.0) || count < 1) {
    throw InvalidArgument("uniform_limits: requires step > 0 and count >= 1");
  }
  std::vector<double> out(count);
  for (int j = 0; j < count; ++j) out[j] = start + step * j;
  return out;
}

const char* to_string(HardyClass cls) {
  switch (cls) {
    case HardyClass::upper: return "upper";
    case HardyClass::lower: return "lower";
    case HardyClass::neither: return "neither";
  }
  return "?";
}

const char* to_string(PairingVerdict verdict) {
  return verdict == PairingVerdict::converged ? "converged" : "diverged";
}

}  // namespace shellres
