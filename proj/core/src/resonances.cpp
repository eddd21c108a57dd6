#include "shellres/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <vector>

#include "shellres/error.hpp"
#include "shellres/regular_solution.hpp"

namespace shellres {
namespace {

constexpr double kAxisTolerance = 1e-9;
constexpr double kMaxPhaseStep = kPi / 2.0;

struct ContourScan {
  double total_phase = 0.0;
  /// Sum of z * d(log J) along the contour; equals 2 pi i * (sum of zeros).
  Complex moment{};
};

class ContourScanner {
 public:
  ContourScanner(JostBranch which, const ShellPotential& pot, int max_depth)
      : which_(which), pot_(pot), max_depth_(max_depth) {}

  ContourScan scan(const SearchRegion& r) const {
    const std::array<Complex, 5> corners = {
        Complex{r.re_min, r.im_min}, Complex{r.re_max, r.im_min},
        Complex{r.re_max, r.im_max}, Complex{r.re_min, r.im_max},
        Complex{r.re_min, r.im_min}};
    ContourScan acc;
    for (int e = 0; e < 4; ++e) scan_edge(corners[e], corners[e + 1], acc);
    return acc;
  }

 private:
  Complex eval(Complex z) const {
    const Complex j = jost_value(which_, ComplexMomentum(z), pot_);
    if (!std::isfinite(j.real()) || !std::isfinite(j.imag()) || j == Complex{}) {
      std::ostringstream msg;
      msg << "Jost function vanishes or overflows on the contour at k = " << z;
      throw BoundaryZeroError(msg.str());
    }
    return j;
  }

  void scan_edge(Complex from, Complex to, ContourScan& acc) const {
    // The Jost functions carry e^{+-2ikb}; sample a few points per radian.
    const double length = std::abs(to - from);
    const int pieces = 16 + static_cast<int>(std::ceil(length * 4.0 * pot_.b()));

    struct Segment {
      Complex za, ja, zb, jb;
      int depth;
    };
    std::vector<Segment> stack;
    Complex prev_z = from;
    Complex prev_j = eval(from);
    std::vector<Segment> initial;
    initial.reserve(pieces);
    for (int i = 1; i <= pieces; ++i) {
      const Complex z = i == pieces ? to : from + (to - from) * (double(i) / pieces);
      const Complex j = eval(z);
      initial.push_back({prev_z, prev_j, z, j, 0});
      prev_z = z;
      prev_j = j;
    }
    for (auto it = initial.rbegin(); it != initial.rend(); ++it) stack.push_back(*it);

    while (!stack.empty()) {
      const Segment s = stack.back();
      stack.pop_back();
      const Complex zm = 0.5 * (s.za + s.zb);
      const Complex jm = eval(zm);
      const double d1 = std::arg(jm / s.ja);
      const double d2 = std::arg(s.jb / jm);
      if (std::abs(d1) < kMaxPhaseStep && std::abs(d2) < kMaxPhaseStep) {
        acc.total_phase += d1 + d2;
        acc.moment += 0.5 * (s.za + zm) * Complex(std::log(std::abs(jm / s.ja)), d1);
        acc.moment += 0.5 * (zm + s.zb) * Complex(std::log(std::abs(s.jb / jm)), d2);
        continue;
      }
      if (s.depth >= max_depth_ || std::abs(s.zb - s.za) < 1e-13) {
        std::ostringstream msg;
        msg << "phase of J" << (which_ == JostBranch::plus ? "+" : "-")
            << " cannot be resolved near k = " << zm
            << " (zero on or next to the contour)";
        throw BoundaryZeroError(msg.str());
      }
      stack.push_back({zm, jm, s.zb, s.jb, s.depth + 1});
      stack.push_back({s.za, s.ja, zm, jm, s.depth + 1});
    }
  }

  JostBranch which_;
  const ShellPotential& pot_;
  int max_depth_;
};

struct Winding {
  int count;
  Complex zero_sum;
};

Winding winding(const ContourScanner& scanner, const SearchRegion& region) {
  const ContourScan s = scanner.scan(region);
  const double turns = s.total_phase / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1) {
    std::ostringstream msg;
    msg << "non-integral winding " << turns << " around region";
    throw BoundaryZeroError(msg.str());
  }
  return {static_cast<int>(rounded), s.moment / (2.0 * kPi * kI)};
}

Complex jost_derivative(JostBranch which, Complex z, const ShellPotential& pot) {
  const double h = 1e-6 * std::max(1.0, std::abs(z));
  const Complex fp = jost_value(which, ComplexMomentum(z + h), pot);
  const Complex fm = jost_value(which, ComplexMomentum(z - h), pot);
  return (fp - fm) / (2.0 * h);
}

class ZeroSearch {
 public:
  ZeroSearch(JostBranch which, const ShellPotential& pot, const ZeroSearchOptions& opts)
      : which_(which), pot_(pot), opts_(opts), scanner_(which, pot, opts.max_depth) {}

  void run(const SearchRegion& region, const Winding& w, int depth,
           std::vector<Resonance>& out) const {
    if (w.count <= 0) return;
    if (w.count == 1) {
      const double size = std::max(region.re_max - region.re_min,
                                   region.im_max - region.im_min);
      Complex guess = w.zero_sum;
      if (!region.contains(guess)) {
        guess = {0.5 * (region.re_min + region.re_max),
                 0.5 * (region.im_min + region.im_max)};
      }
      try {
        Resonance res = refine_zero(which_, guess, pot_, opts_);
        if (region.contains(res.k_pole.value, 1e-9 * std::max(1.0, size))) {
          out.push_back(res);
          return;
        }
      } catch (const RefinementError&) {
        if (depth >= opts_.max_depth) throw;
      }
      if (depth >= opts_.max_depth) {
        throw RefinementError("Newton iterate left its isolating rectangle", guess,
                              std::abs(jost_value(which_, ComplexMomentum(guess), pot_)));
      }
    }
    if (depth >= opts_.max_depth) {
      const Complex centre{0.5 * (region.re_min + region.re_max),
                           0.5 * (region.im_min + region.im_max)};
      throw RefinementError("could not isolate zeros (multiple zero?)", centre,
                            std::abs(jost_value(which_, ComplexMomentum(centre), pot_)));
    }
    split(region, w, depth, out);
  }

 private:
  void split(const SearchRegion& r, const Winding& w, int depth,
             std::vector<Resonance>& out) const {
    const bool along_re = (r.re_max - r.re_min) >= (r.im_max - r.im_min);
    static constexpr std::array<double, 5> kFractions = {0.5, 0.5371, 0.4629, 0.5813,
                                                         0.4187};
    for (double frac : kFractions) {
      SearchRegion lo = r;
      SearchRegion hi = r;
      if (along_re) {
        const double cut = r.re_min + frac * (r.re_max - r.re_min);
        lo.re_max = cut;
        hi.re_min = cut;
      } else {
        const double cut = r.im_min + frac * (r.im_max - r.im_min);
        lo.im_max = cut;
        hi.im_min = cut;
      }
      Winding wl;
      Winding wh;
      try {
        wl = winding(scanner_, lo);
        wh = winding(scanner_, hi);
      } catch (const BoundaryZeroError&) {
        continue;
      }
      if (wl.count + wh.count != w.count) continue;
      run(lo, wl, depth + 1, out);
      run(hi, wh, depth + 1, out);
      return;
    }
    const Complex centre{0.5 * (r.re_min + r.re_max), 0.5 * (r.im_min + r.im_max)};
    throw RefinementError("no boundary-safe bisection of search rectangle", centre,
                          std::abs(jost_value(which_, ComplexMomentum(centre), pot_)));
  }

  JostBranch which_;
  const ShellPotential& pot_;
  const ZeroSearchOptions& opts_;
  ContourScanner scanner_;
};

// Runs `body` on the region, expanding it on boundary zeros.
template <class Body>
auto with_perturbation(const SearchRegion& region, const ZeroSearchOptions& opts,
                       Body&& body) {
  for (int attempt = 0;; ++attempt) {
    try {
      return body(attempt == 0 ? region : region.expanded(opts.perturbation * attempt));
    } catch (const BoundaryZeroError&) {
      if (attempt >= opts.max_perturbations) throw;
    }
  }
}

}  // namespace

SearchRegion SearchRegion::make(double re_min, double re_max, double im_min,
                                double im_max) {
  if (!(re_min < re_max) || !(im_min < im_max)) {
    throw InvalidArgument("search region: requires re_min < re_max and im_min < im_max");
  }
  // Distance from the origin to the rectangle.
  const double dx = std::max({re_min, 0.0, -re_max});
  const double dy = std::max({im_min, 0.0, -im_max});
  if (std::hypot(dx, dy) <= 1e-6) {
    throw InvalidArgument("search region: must exclude the disc |k| <= 1e-6 around k = 0");
  }
  return {re_min, re_max, im_min, im_max};
}

bool SearchRegion::contains(Complex k, double margin) const {
  return k.real() >= re_min - margin && k.real() <= re_max + margin &&
         k.imag() >= im_min - margin && k.imag() <= im_max + margin;
}

SearchRegion SearchRegion::expanded(double by) const {
  return {re_min - by, re_max + by, im_min - by, im_max + by};
}

Complex jost_value(JostBranch which, ComplexMomentum k, const ShellPotential& pot) {
  const JostPair j = jost(k, pot);
  return which == JostBranch::plus ? j.plus : j.minus;
}

int count_zeros(JostBranch which, const SearchRegion& region, const ShellPotential& pot,
                const ZeroSearchOptions& opts) {
  const ContourScanner scanner(which, pot, opts.max_depth);
  return with_perturbation(region, opts, [&](const SearchRegion& r) {
    return winding(scanner, r).count;
  });
}

std::vector<Resonance> find_resonances(JostBranch which, const SearchRegion& region,
                                       const ShellPotential& pot,
                                       const ZeroSearchOptions& opts) {
  const ZeroSearch search(which, pot, opts);
  const ContourScanner scanner(which, pot, opts.max_depth);
  return with_perturbation(region, opts, [&](const SearchRegion& r) {
    const Winding w = winding(scanner, r);
    std::vector<Resonance> found;
    search.run(r, w, 0, found);

    std::sort(found.begin(), found.end(), [](const Resonance& x, const Resonance& y) {
      if (x.k_pole.real() != y.k_pole.real()) return x.k_pole.real() < y.k_pole.real();
      return x.k_pole.imag() < y.k_pole.imag();
    });
    std::vector<Resonance> unique;
    for (const auto& res : found) {
      const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const Resonance& u) {
        return std::abs(u.k_pole.value - res.k_pole.value) < opts.dedup_radius;
      });
      if (!duplicate) unique.push_back(res);
    }
    if (static_cast<int>(unique.size()) != w.count) {
      std::ostringstream msg;
      msg << "found " << unique.size() << " distinct zeros but the winding number is "
          << w.count;
      const Complex best = unique.empty() ? Complex{} : unique.back().k_pole.value;
      throw RefinementError(msg.str(), best, unique.empty() ? 0.0 : unique.back().residual);
    }
    return unique;
  });
}

Resonance refine_zero(JostBranch which, Complex guess, const ShellPotential& pot,
                      const ZeroSearchOptions& opts) {
  Complex z = guess;
  Complex value = jost_value(which, ComplexMomentum(z), pot);
  Complex best = z;
  double best_residual = std::abs(value);
  int iter = 0;
  for (; iter < opts.max_newton; ++iter) {
    if (std::abs(value) < 1e-3 * opts.residual_tol) break;
    const Complex slope = jost_derivative(which, z, pot);
    if (slope == Complex{} || !std::isfinite(std::abs(slope))) break;
    const Complex step = value / slope;
    z -= step;
    value = jost_value(which, ComplexMomentum(z), pot);
    if (!std::isfinite(std::abs(value))) break;
    if (std::abs(value) < best_residual) {
      best_residual = std::abs(value);
      best = z;
    }
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  if (!(best_residual < opts.residual_tol)) {
    std::ostringstream msg;
    msg << "Newton refinement of J" << (which == JostBranch::plus ? "+" : "-")
        << " zero did not reach residual " << opts.residual_tol << " after " << iter
        << " iterations (best " << best_residual << ")";
    throw RefinementError(msg.str(), best, best_residual);
  }
  Resonance res;
  res.k_pole = ComplexMomentum(best);
  res.energy = momentum_to_energy(res.k_pole, pot.units());
  res.which = which;
  res.residual = best_residual;
  res.quadrant = quadrant_of(best).value_or(best.real() >= 0.0
                                                ? (best.imag() >= 0.0 ? Quadrant::I : Quadrant::IV)
                                                : (best.imag() >= 0.0 ? Quadrant::II : Quadrant::III));
  res.newton_iterations = iter;
  return res;
}

std::optional<Quadrant> quadrant_of(Complex k) {
  if (std::abs(k.real()) < kAxisTolerance || std::abs(k.imag()) < kAxisTolerance) {
    return std::nullopt;
  }
  if (k.real() > 0.0) return k.imag() > 0.0 ? Quadrant::I : Quadrant::IV;
  return k.imag() > 0.0 ? Quadrant::II : Quadrant::III;
}

std::array<SearchRegion, 4> quadrant_regions(const CensusBox& box) {
  const double c = box.axis_clearance;
  const double re = box.re_extent;
  const double im = box.im_extent;
  if (!(c > 0.0) || !(re > c) || !(im > c)) {
    throw InvalidArgument("census box: requires 0 < axis_clearance < extents");
  }
  return {SearchRegion::make(c, re, c, im), SearchRegion::make(-re, -c, c, im),
          SearchRegion::make(-re, -c, -im, -c), SearchRegion::make(c, re, -im, -c)};
}

QuadrantCensus quadrant_census(const CensusBox& box, const ShellPotential& pot,
                               const ZeroSearchOptions& opts, int jobs) {
  const auto regions = quadrant_regions(box);
  struct Task {
    JostBranch which;
    SearchRegion region;
  };
  std::vector<Task> tasks;
  for (JostBranch which : {JostBranch::plus, JostBranch::minus}) {
    for (const auto& region : regions) tasks.push_back({which, region});
  }

  std::vector<std::vector<Resonance>> results(tasks.size());
  auto run = [&](std::size_t i) {
    results[i] = find_resonances(tasks[i].which, tasks[i].region, pot, opts);
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run(i);
  } else {
    for (std::size_t start = 0; start < tasks.size(); start += jobs) {
      std::vector<std::future<void>> wave;
      for (std::size_t i = start; i < std::min(tasks.size(), start + jobs); ++i) {
        wave.push_back(std::async(std::launch::async, run, i));
      }
      for (auto& f : wave) f.get();
    }
  }

  QuadrantCensus census;
  for (const auto& list : results) {
    for (const auto& res : list) {
      const auto q = quadrant_of(res.k_pole.value);
      if (!q) continue;
      ++census.counts[static_cast<int>(*q)];
      census.zeros.push_back(res);
    }
  }
  return census;
}

const char* to_string(JostBranch which) {
  return which == JostBranch::plus ? "plus" : "minus";
}

const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::I: return "I";
    case Quadrant::II: return "II";
    case Quadrant::III: return "III";
    case Quadrant::IV: return "IV";
  }
  return "?";
}

}  // namespace shellres
