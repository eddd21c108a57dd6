#pragma once

// Delta-normalized eigenfunction families of the shell Hamiltonian, the
// unitary transforms they induce, and the analytic continuation of those
// transforms off the real energy axis.
//
//   chi_sw(r;E) = sqrt(rho_sw(E)) chi(r;E),       rho_sw = rho / |J+|^2
//   chi_pm(r;E) = sqrt(rho(E)) chi(r;E) / J_pm,   rho = (1/pi) c0 / k
//   (U f)(E)    = int_0^inf conj(eigenfunction(r;E)) f(r) dr

#include <optional>
#include <span>
#include <vector>

#include "shellres/model.hpp"
#include "shellres/regular_solution.hpp"
#include "shellres/resonances.hpp"
#include "shellres/test_function.hpp"

namespace shellres {

enum class EigenfunctionKind { sw, plus, minus };

enum class CheckStatus { ok, inconclusive };

/// rho(E) = (1/pi) (2m/hbar^2) / k. Requires E > 0.
double spectral_density(double energy, const UnitSystem& units);
/// rho_sw(E) = rho(E) / |J+(E)|^2. Requires E > 0.
double spectral_density_sw(double energy, const ShellPotential& pot);

/// Throws OutOfSpectrumError for E <= 0 and InvalidArgument for r < 0.
Complex eval_eigenfunction(EigenfunctionKind kind, double r, double energy,
                           const ShellPotential& pot);

struct OverlapOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_panels = 40000;
};

struct OverlapResult {
  Complex value;
  double error = 0.0;
  bool converged = true;
};

/// int_0^inf chi(r;k) f(r) dr: adaptive quadrature up to the shell edge (and
/// over the remaining support), closed-form exterior tail for exp_decay.
/// Throws DivergenceError when f does not outpace the growth e^{|Im k| r}.
OverlapResult radial_overlap(const TestFunction& f, const MatchingCoefficients& coeffs,
                             const OverlapOptions& opts = {});

struct TransformSample {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  std::vector<double> energies;
  std::vector<Complex> values;
  /// Per-point quadrature error estimates.
  std::vector<double> errors;
  /// Largest entry of `errors`.
  double quadrature_error = 0.0;
};

/// (U f)(E) on a grid of positive energies, each point to absolute error tol.
/// Throws QuadratureError if a point misses tol.
TransformSample transform(EigenfunctionKind kind, const TestFunction& f,
                          std::span<const double> energies, const ShellPotential& pot,
                          double tol = 1e-10, int jobs = 1);

/// Same, reusing matching coefficients from `cache` (whose potential is used).
TransformSample transform(EigenfunctionKind kind, const TestFunction& f,
                          std::span<const double> energies, const CoefficientCache& cache,
                          double tol = 1e-10, int jobs = 1);

struct ParsevalOptions {
  double tolerance = 1e-6;
  /// First momentum cutoff; doubled until the tail bound is below tolerance.
  double k_cut_start = 128.0;
  double k_cut_max = 2048.0;
  double quad_rel_tol = 1e-11;
};

struct ParsevalReport {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  /// |‖Uf‖² − ‖f‖²| / ‖f‖².
  double deviation = 0.0;
  double norm_f2 = 0.0;
  double norm_uf2 = 0.0;
  double cutoff_momentum = 0.0;
  double cutoff_energy = 0.0;
  /// Leading large-energy tail (2/pi) f(0)^2 / K added beyond the cutoff.
  double tail_estimate = 0.0;
  /// Mismatch of that asymptotic law on [K/2, K]; bounds the tail error.
  double tail_bound = 0.0;
  double quadrature_error = 0.0;
  CheckStatus status = CheckStatus::ok;
};

/// Unitarity of U on f: compares ‖Uf‖² (integrated over energy) with ‖f‖².
ParsevalReport parseval_check(EigenfunctionKind kind, const TestFunction& f,
                              const ShellPotential& pot, const ParsevalOptions& opts = {});

struct ContinuationValue {
  ComplexMomentum k;
  Complex value;
  Complex prefactor;
  Complex overlap;
  double quadrature_error = 0.0;
  /// Distance to the closest entry of the supplied zero table, if any.
  std::optional<double> nearest_zero_distance;
};

struct ContinuationOptions {
  double rel_tol = 1e-12;
};

/// Analytic continuation of (U f)(E) to complex k, as prefactor times
/// int chi(r;k) f(r) dr with
///   sw:    sqrt((1/pi)(c0/k) / (J+ J-))   principal branch of the whole radicand
///   plus:  sqrt((1/pi)(c0/k)) / J-
///   minus: sqrt((1/pi)(c0/k)) / J+
/// On the real axis this reproduces `transform`.
ContinuationValue continue_transform(EigenfunctionKind kind, const TestFunction& f,
                                     ComplexMomentum k, const ShellPotential& pot,
                                     std::span<const Resonance> zero_table = {},
                                     const ContinuationOptions& opts = {});

ContinuationValue continue_transform_sw(const TestFunction& f, ComplexMomentum k,
                                        const ShellPotential& pot,
                                        std::span<const Resonance> zero_table = {},
                                        const ContinuationOptions& opts = {});

/// Multiplies every value by e^{-iEt}; the grid is unchanged.
TransformSample evolve_energy_rep(const TransformSample& sample, double t);

/// E_j = k_j^2 / c0 with k_j = k_max (j + 1) / count.
std::vector<double> standard_real_axis_energies(const UnitSystem& units, int count = 50,
                                                double k_max = 6.0);

const char* to_string(EigenfunctionKind kind);
const char* to_string(CheckStatus status);

}  // namespace shellres
