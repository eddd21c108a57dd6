#include "shellres/model.hpp"

#include <cmath>
#include <sstream>

#include "shellres/error.hpp"

namespace shellres {

UnitSystem::UnitSystem(double hbar, double mass)
    : hbar_(hbar), mass_(mass), c0_(2.0 * mass / (hbar * hbar)) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw InvalidArgument("units: hbar must be a positive finite number");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvalidArgument("units: mass must be a positive finite number");
  }
}

ShellPotential::ShellPotential(double a, double b, double v0, UnitSystem units)
    : a_(a), b_(b), v0_(v0), units_(units) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(v0)) {
    throw InvalidArgument("potential: a, b and v0 must be finite");
  }
  if (!(a > 0.0) || !(a < b)) {
    std::ostringstream msg;
    msg << "potential: requires 0 < a < b (got a=" << a << ", b=" << b << ")";
    throw InvalidArgument(msg.str());
  }
}

Complex momentum_to_energy(ComplexMomentum k, const UnitSystem& units) {
  return k.value * k.value / units.c0();
}

Complex interior_momentum(ComplexMomentum k, const ShellPotential& pot,
                          QBranch branch) {
  Complex radicand = k.value * k.value - pot.units().c0() * pot.v0();
  // Pin signed zeros so real k below the barrier always gets Im Q >= 0.
  if (radicand.imag() == 0.0) radicand.imag(0.0);
  const Complex q = std::sqrt(radicand);
  return branch == QBranch::principal ? q : -q;
}

}  // namespace shellres
