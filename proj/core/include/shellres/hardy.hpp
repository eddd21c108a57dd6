#pragma once

// Numerical evidence about Hardy-class membership of energy-representation
// functions, growth of continued transforms along rays, and convergence of
// Gamow-state pairings.

#include <optional>
#include <span>
#include <vector>

#include "shellres/model.hpp"
#include "shellres/regular_solution.hpp"
#include "shellres/resonances.hpp"
#include "shellres/spectral.hpp"
#include "shellres/test_function.hpp"

namespace shellres {

enum class HardyClass { upper, lower, neither };

struct HardyVerdict {
  HardyClass cls = HardyClass::neither;
  /// Spectral energy of G(t) = int g(E) e^{-iEt} dE on t < -guard_time.
  double negative_time_fraction = 0.0;
  /// Same on t > guard_time. The two fractions sum to one.
  double positive_time_fraction = 0.0;
  double threshold = 1e-3;
  CheckStatus status = CheckStatus::ok;
  /// Windowed magnitude at the grid ends relative to the windowed peak.
  double edge_magnitude = 0.0;
  /// Half-width of the band around t = 0 excluded from both fractions.
  double guard_time = 0.0;
};

/// Periodic grid E_j = -e_max + 2 e_max j / points, j = 0..points-1.
std::vector<double> hardy_grid(double e_max, int points);

/// Paley-Wiener test on samples of g over hardy_grid(e_max, samples.size()).
/// Upper-half-plane Hardy functions have G supported on t > 0, lower ones on
/// t < 0. The samples are tapered by a Gaussian window of standard deviation
/// e_max / 6.5; the window's time resolution blurs G around t = 0, so a
/// guard band of 6 time-standard-deviations is left out. Requires at least
/// 1024 samples.
HardyVerdict classify_hardy(std::span<const Complex> samples, double e_max,
                            double threshold = 1e-3);

struct ArcProbeReport {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  double ray_angle = 0.0;
  std::vector<double> radii;
  std::vector<double> magnitudes;
  /// magnitudes.back() / magnitudes.front(); zero for the zero function.
  double growth_ratio = 0.0;
};

/// |continued (U f)(k)| at k = R e^{i ray_angle}. f must have compact support
/// and the ray must stay at least pi/16 away from the real axis.
ArcProbeReport arc_growth_probe(EigenfunctionKind kind, const TestFunction& f,
                                double ray_angle, std::span<const double> radii,
                                const ShellPotential& pot);

/// Purely outgoing solution chi(r; k0) at a zero k0 of J+ with Im k0 < 0.
class GamowState {
 public:
  /// Throws InvalidArgument unless `res` is a J+ zero in the lower half-plane
  /// whose incoming amplitude |j4| is below 1e-10.
  static GamowState from_resonance(const Resonance& res, const ShellPotential& pot);

  const Resonance& resonance() const noexcept { return resonance_; }
  const MatchingCoefficients& coefficients() const noexcept { return coeffs_; }
  double growth_rate() const noexcept { return std::abs(resonance_.k_pole.imag()); }

  Complex operator()(double r) const { return eval_chi(r, coeffs_); }

 private:
  GamowState(Resonance res, MatchingCoefficients coeffs)
      : resonance_(res), coeffs_(coeffs) {}

  Resonance resonance_;
  MatchingCoefficients coeffs_;
};

enum class PairingVerdict { converged, diverged };

struct PairingReport {
  std::vector<double> r_limits;
  /// int_0^R conj(phi(r)) u(r) dr for each R.
  std::vector<Complex> partial;
  PairingVerdict verdict = PairingVerdict::converged;
  /// Geometric extrapolation of the partial sums when converged.
  std::optional<Complex> limit;
  /// Least-squares slope of log|P(R_j) - P(R_{j-1})| against R; -inf when the
  /// partial sums are exactly constant.
  double measured_exponent = 0.0;
  /// growth_rate - alpha for exp_decay test functions.
  std::optional<double> expected_exponent;
};

/// Partial pairings <phi|u> over [0, R] for each R in r_limits (increasing,
/// at least three, uniformly spaced for a meaningful exponent). Divergence is
/// reported, not thrown.
PairingReport gamow_pair(const TestFunction& f, const GamowState& state,
                         std::span<const double> r_limits);

/// R_j = b + step * j, j = 0..count-1.
std::vector<double> uniform_limits(double start, double step, int count);

const char* to_string(HardyClass cls);
const char* to_string(PairingVerdict verdict);

}  // namespace shellres
