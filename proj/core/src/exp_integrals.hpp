#pragma once

// Closed forms for integrals of r^n e^{-s r}, used for the exterior region
// where the regular solution is a sum of two exponentials.

#include <cmath>
#include <complex>
#include <limits>

namespace shellres::detail {

/// e^{-s x} sum_{j=0}^{n} n!/(n-j)! x^{n-j} / s^{j+1}, the value at x of minus
/// an antiderivative of r^n e^{-s r}.
inline std::complex<double> exp_poly_primitive(int n, std::complex<double> s, double x) {
  std::complex<double> sum{};
  double falling = 1.0;  // n!/(n-j)!
  std::complex<double> s_pow = s;
  for (int j = 0; j <= n; ++j) {
    sum += falling * std::pow(x, n - j) / s_pow;
    falling *= (n - j);
    s_pow *= s;
  }
  return std::exp(-s * x) * sum;
}

/// Integral of r^n e^{-s r} over [lo, hi]; hi may be +infinity when Re s > 0.
inline std::complex<double> exp_poly_integral(int n, std::complex<double> s, double lo,
                                              double hi) {
  if (std::abs(s) * std::max(std::abs(lo), std::abs(hi)) < 1e-9 && std::isfinite(hi)) {
    return (std::pow(hi, n + 1) - std::pow(lo, n + 1)) / (n + 1.0);
  }
  const std::complex<double> upper =
      std::isinf(hi) ? std::complex<double>{} : exp_poly_primitive(n, s, hi);
  return exp_poly_primitive(n, s, lo) - upper;
}

}  // namespace shellres::detail
