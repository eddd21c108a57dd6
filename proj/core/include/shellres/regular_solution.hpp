#pragma once

// Regular solution of the s-wave radial equation for the shell potential,
// obtained by closed-form matching of value and derivative at r = a and
// r = b, and the Jost functions read off its large-r exponentials.
//
//   chi(r) = sin(k r)                          0 <= r < a
//          = j1 e^{iQr} + j2 e^{-iQr}          a <= r < b
//          = j3 e^{ikr} + j4 e^{-ikr}          b <= r
//
//   J+(k) = -2i j4,  J-(k) = 2i j3.

#include <cstddef>
#include <shared_mutex>
#include <unordered_map>

#include "shellres/model.hpp"

namespace shellres {

struct MatchingCoefficients {
  Complex j1;
  Complex j2;
  Complex j3;
  Complex j4;
  ComplexMomentum k;
  /// Barrier momentum that j1, j2 refer to.
  Complex q;
  /// sin(ka) and k cos(ka); used where Q is too small for the exponential form.
  Complex value_at_a;
  Complex slope_at_a;
  ShellPotential pot;
};

struct JostPair {
  Complex plus;
  Complex minus;
  ComplexMomentum k;
};

/// Throws DegenerateMomentumError for k = 0.
MatchingCoefficients solve_matching(ComplexMomentum k, const ShellPotential& pot,
                                    QBranch branch = QBranch::principal);

Complex eval_chi(double r, const MatchingCoefficients& coeffs);
Complex eval_chi(double r, ComplexMomentum k, const ShellPotential& pot);

/// d chi / dr, evaluated from the same piecewise closed form.
Complex eval_chi_derivative(double r, const MatchingCoefficients& coeffs);

JostPair jost(const MatchingCoefficients& coeffs);
JostPair jost(ComplexMomentum k, const ShellPotential& pot);

/// |-(hbar^2/2m) chi'' + (V - E) chi| with chi'' from a centered second
/// difference of step h. `r - h` and `r + h` should lie in the same region.
/// h = 0 picks 3e-4 / max(1, w) with w the local wavenumber (|k| or |Q|),
/// which balances truncation against cancellation in the difference.
double schrodinger_residual(double r, ComplexMomentum k, const ShellPotential& pot,
                            double h = 0.0);

/// Write-once / read-many memo of matching coefficients for one potential.
/// Concurrent callers may race to insert the same key; both compute the same
/// value and the first insert wins.
class CoefficientCache {
 public:
  explicit CoefficientCache(ShellPotential pot) : pot_(pot) {}

  MatchingCoefficients get(ComplexMomentum k) const;
  std::size_t size() const;
  const ShellPotential& potential() const noexcept { return pot_; }

 private:
  struct Key {
    double re;
    double im;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept;
  };

  ShellPotential pot_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Key, MatchingCoefficients, KeyHash> entries_;
};

}  // namespace shellres
