#pragma once

// Units, the spherical shell potential and the momentum/energy kinematics.
//
// The complex momentum k is the master variable throughout the library.
// Energies are always derived from it as E = k^2 / c0 with c0 = 2m/hbar^2,
// so the two sheets of the energy Riemann surface map onto the upper and
// lower half k-planes without any square-root bookkeeping.

#include <complex>

namespace shellres {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Complex kI{0.0, 1.0};

class UnitSystem {
 public:
  /// Natural units 2m = hbar = 1, so c0 = 1 and k = sqrt(E).
  UnitSystem() : UnitSystem(1.0, 0.5) {}
  UnitSystem(double hbar, double mass);

  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }
  /// 2 m / hbar^2.
  double c0() const noexcept { return c0_; }

 private:
  double hbar_;
  double mass_;
  double c0_;
};

/// V(r) = v0 on a < r < b, zero elsewhere.
class ShellPotential {
 public:
  ShellPotential(double a, double b, double v0, UnitSystem units = {});

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double v0() const noexcept { return v0_; }
  const UnitSystem& units() const noexcept { return units_; }

  double operator()(double r) const noexcept {
    return (r > a_ && r < b_) ? v0_ : 0.0;
  }

  bool operator==(const ShellPotential& other) const noexcept {
    return a_ == other.a_ && b_ == other.b_ && v0_ == other.v0_ &&
           units_.hbar() == other.units_.hbar() &&
           units_.mass() == other.units_.mass();
  }

 private:
  double a_;
  double b_;
  double v0_;
  UnitSystem units_;
};

struct ComplexMomentum {
  Complex value;

  constexpr ComplexMomentum() = default;
  constexpr explicit ComplexMomentum(Complex k) : value(k) {}
  constexpr ComplexMomentum(double re, double im) : value(re, im) {}

  constexpr double real() const { return value.real(); }
  constexpr double imag() const { return value.imag(); }
};

/// Which square root of k^2 - c0 v0 is used for the barrier momentum.
enum class QBranch { principal, flipped };

/// E = hbar^2 k^2 / 2m. Entire and even in k.
Complex momentum_to_energy(ComplexMomentum k, const UnitSystem& units);

/// Q = sqrt(k^2 - c0 v0), principal branch unless `branch` says otherwise.
Complex interior_momentum(ComplexMomentum k, const ShellPotential& pot,
                          QBranch branch = QBranch::principal);

}  // namespace shellres
