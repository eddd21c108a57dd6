#pragma once

// Independent reference computations for the test suite. None of these use
// the closed-form matching of the library.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <shellres/model.hpp>
#include <shellres/resonances.hpp>

namespace shellres::testing {

/// chi(r) from classical RK4 on chi'' = c0 (V - E) chi with chi(0) = 0,
/// chi'(0) = k, stepping exactly onto the shell edges.
template <typename T>
T chi_by_ode(double r_end, T k, const ShellPotential& pot, int steps_per_unit = 4000) {
  const T c0 = pot.units().c0();
  const T energy = k * k / c0;
  T y = 0.0;
  T dy = k;
  double r = 0.0;
  auto accel = [&](double at, T value) { return c0 * (T(pot(at)) - energy) * value; };
  std::vector<double> stops;
  for (double edge : {pot.a(), pot.b()}) {
    if (edge < r_end) stops.push_back(edge);
  }
  stops.push_back(r_end);
  for (double stop : stops) {
    const int n = std::max(1, static_cast<int>(std::ceil((stop - r) * steps_per_unit)));
    const double h = (stop - r) / n;
    // Sample the potential at the segment midpoint so the edges are never straddled.
    const double mid = 0.5 * (r + stop);
    for (int i = 0; i < n; ++i) {
      auto f = [&](T v) { return accel(mid, v); };
      const T k1y = dy, k1v = f(y);
      const T k2y = dy + 0.5 * h * k1v, k2v = f(y + 0.5 * h * k1y);
      const T k3y = dy + 0.5 * h * k2v, k3v = f(y + 0.5 * h * k2y);
      const T k4y = dy + h * k3v, k4v = f(y + h * k3y);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    r = stop;
  }
  return y;
}

/// int_0^inf sin(k r) r^n e^{-alpha r} dr = Im[n! / (alpha - i k)^{n+1}].
inline double sine_transform_exp(double k, double alpha, int n) {
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return std::imag(factorial / std::pow(std::complex<double>(alpha, -k), n + 1));
}

/// Strict local minima of |fn| on an n x n grid over the region, edge rows
/// and columns excluded.
inline std::vector<Complex> grid_minima(const std::function<Complex(Complex)>& fn,
                                        const SearchRegion& region, int n = 400) {
  std::vector<double> mag(static_cast<std::size_t>(n) * n);
  const double dx = (region.re_max - region.re_min) / (n - 1);
  const double dy = (region.im_max - region.im_min) / (n - 1);
  auto at = [&](int i, int j) { return Complex(region.re_min + i * dx, region.im_min + j * dy); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mag[static_cast<std::size_t>(i) * n + j] = std::abs(fn(at(i, j)));
  }
  std::vector<Complex> out;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = 1; j + 1 < n; ++j) {
      const double c = mag[static_cast<std::size_t>(i) * n + j];
      bool minimum = true;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && !(c < mag[static_cast<std::size_t>(i + di) * n + j + dj])) minimum = false;
        }
      }
      if (minimum) out.push_back(at(i, j));
    }
  }
  return out;
}

}  // namespace shellres::testing
