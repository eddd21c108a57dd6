#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.
//
// Panels are kept in a max-heap keyed by their error estimate |K15 - G7|;
// the worst panel is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * integral of |f|) or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace shellres::quadrature {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  /// Uniform panels the interval starts with; set from the oscillation scale.
  int initial_panels = 1;
  int max_panels = 50000;
};

struct Result {
  std::complex<double> value;
  double error = 0.0;
  /// Integral of |f|, the scale used by rel_tol.
  double magnitude = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  std::complex<double> value;
  double error;
  double magnitude;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod(F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const std::complex<double> fc = f(centre);
  std::complex<double> kronrod = kKronrodWeights[7] * fc;
  std::complex<double> gauss = kGaussWeights[3] * fc;
  double magnitude = kKronrodWeights[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const std::complex<double> f1 = f(centre - dx);
    const std::complex<double> f2 = f(centre + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    magnitude += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  // Once the Gauss and Kronrod sums agree to the last bit their difference
  // says nothing; the estimate never drops below the rounding level.
  const double scale = magnitude * std::abs(half);
  const double roundoff = std::numeric_limits<double>::epsilon() * scale;
  return {lo, hi, kronrod * half, std::max(std::abs((kronrod - gauss) * half), roundoff), scale};
}

}  // namespace detail

/// Integrates f over consecutive intervals [breaks[i], breaks[i+1]], each
/// starting with `opts.initial_panels` panels, under one shared error budget.
template <class F>
Result integrate(F&& f, std::span<const double> breaks, const Options& opts) {
  std::vector<detail::Panel> heap;
  Result out;
  if (breaks.size() < 2) {
    out.converged = true;
    return out;
  }
  const int per_interval = std::max(1, opts.initial_panels);
  heap.reserve(static_cast<std::size_t>(per_interval) * breaks.size() + 64);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    if (!(hi > lo)) continue;
    const double width = (hi - lo) / per_interval;
    for (int p = 0; p < per_interval; ++p) {
      const double plo = lo + p * width;
      const double phi = p + 1 == per_interval ? hi : lo + (p + 1) * width;
      heap.push_back(detail::gauss_kronrod(f, plo, phi));
      out.evaluations += 15;
    }
  }
  std::make_heap(heap.begin(), heap.end());

  auto totals = [&heap]() {
    double err = 0.0;
    double mag = 0.0;
    for (const auto& p : heap) {
      err += p.error;
      mag += p.magnitude;
    }
    return std::pair{err, mag};
  };

  auto [error, magnitude] = totals();
  const auto target = [&](double mag) {
    return std::max(opts.abs_tol, opts.rel_tol * mag);
  };
  while (error > target(magnitude) &&
         static_cast<int>(heap.size()) < opts.max_panels) {
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const detail::Panel left = detail::gauss_kronrod(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod(f, mid, worst.hi);
    out.evaluations += 30;
    error += left.error + right.error - worst.error;
    magnitude += left.magnitude + right.magnitude - worst.magnitude;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  // Re-sum from scratch; the running totals accumulate rounding.
  std::tie(error, magnitude) = totals();
  std::complex<double> value{};
  for (const auto& p : heap) value += p.value;
  out.value = value;
  out.error = error;
  out.magnitude = magnitude;
  out.converged = error <= target(magnitude);
  return out;
}

template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts) {
  const std::array<double, 2> breaks{lo, hi};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), opts);
}

}  // namespace shellres::quadrature
