#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace shellres {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation received arguments violating its invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// k = 0: the inner solution sin(kr) vanishes identically.
class DegenerateMomentumError : public Error {
 public:
  DegenerateMomentumError()
      : Error("degenerate momentum: k = 0 makes the regular solution vanish") {}
};

/// Eigenfunctions are only defined on the continuum E > 0.
class OutOfSpectrumError : public Error {
 public:
  explicit OutOfSpectrumError(double energy)
      : Error("energy " + std::to_string(energy) +
              " is outside the continuous spectrum (E > 0)"),
        energy_(energy) {}
  double energy() const noexcept { return energy_; }

 private:
  double energy_;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(double achieved, double requested)
      : Error("quadrature tolerance not met: achieved " +
              std::to_string(achieved) + ", requested " +
              std::to_string(requested)),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A Jost function vanishes (numerically) on a contour used for winding.
class BoundaryZeroError : public Error {
 public:
  using Error::Error;
};

/// Newton refinement of a Jost zero did not converge.
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, std::complex<double> best,
                  double residual)
      : Error(what), best_(best), residual_(residual) {}
  std::complex<double> best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  std::complex<double> best_;
  double residual_;
};

/// The overlap integral against a growing exponential does not converge.
class DivergenceError : public Error {
 public:
  DivergenceError(double decay_rate, double growth_rate)
      : Error("divergent overlap: test-function decay rate " +
              std::to_string(decay_rate) +
              " does not exceed kernel growth rate |Im k| = " +
              std::to_string(growth_rate)),
        decay_rate_(decay_rate),
        growth_rate_(growth_rate) {}
  double decay_rate() const noexcept { return decay_rate_; }
  double growth_rate() const noexcept { return growth_rate_; }

 private:
  double decay_rate_;
  double growth_rate_;
};

}  // namespace shellres
