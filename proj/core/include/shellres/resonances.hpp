#pragma once

// Complex zeros of the Jost functions.
//
// Zeros are counted with the argument principle around rectangles, the
// rectangle is bisected until every piece winds at most once, and each
// simple zero is then polished by Newton iteration. Counting first makes
// the search exhaustive inside the region, which is what a census needs.

#include <array>
#include <optional>
#include <vector>

#include "shellres/model.hpp"

namespace shellres {

enum class JostBranch { plus, minus };

/// Open quadrants of the k-plane, numbered counter-clockwise.
enum class Quadrant { I, II, III, IV };

struct SearchRegion {
  double re_min;
  double re_max;
  double im_min;
  double im_max;

  /// Validated construction: ordered bounds, no overlap with |k| <= 1e-6.
  static SearchRegion make(double re_min, double re_max, double im_min, double im_max);

  bool contains(Complex k, double margin = 0.0) const;
  SearchRegion expanded(double by) const;
};

struct Resonance {
  ComplexMomentum k_pole;
  Complex energy;
  JostBranch which;
  double residual;
  Quadrant quadrant;
  int newton_iterations = 0;
};

struct ZeroSearchOptions {
  double residual_tol = 1e-10;
  double dedup_radius = 1e-8;
  int max_newton = 100;
  int max_perturbations = 3;
  double perturbation = 1e-4;
  int max_depth = 48;
};

/// J+ or J- at k.
Complex jost_value(JostBranch which, ComplexMomentum k, const ShellPotential& pot);

/// Number of zeros (with multiplicity) inside the rectangle.
int count_zeros(JostBranch which, const SearchRegion& region, const ShellPotential& pot,
                const ZeroSearchOptions& opts = {});

/// All zeros inside the rectangle, sorted by real then imaginary part.
std::vector<Resonance> find_resonances(JostBranch which, const SearchRegion& region,
                                       const ShellPotential& pot,
                                       const ZeroSearchOptions& opts = {});

/// Newton polish of a single zero. Throws RefinementError on failure.
Resonance refine_zero(JostBranch which, Complex guess, const ShellPotential& pot,
                      const ZeroSearchOptions& opts = {});

/// nullopt when |Re k| or |Im k| is below 1e-9.
std::optional<Quadrant> quadrant_of(Complex k);

struct QuadrantCensus {
  std::array<int, 4> counts{};
  /// Zeros of J+ and J- inside the four quadrant rectangles.
  std::vector<Resonance> zeros;

  int count(Quadrant q) const { return counts[static_cast<int>(q)]; }
};

struct CensusBox {
  double re_extent = 6.0;
  double im_extent = 2.0;
  /// Distance kept from both axes.
  double axis_clearance = 1e-3;
};

/// The four quadrant rectangles of the box, in quadrant order I..IV.
std::array<SearchRegion, 4> quadrant_regions(const CensusBox& box);

/// Zeros of J+ * J- per open quadrant. `jobs` > 1 searches the eight
/// (quadrant, branch) rectangles concurrently; results are merged in a fixed
/// order so the output does not depend on scheduling.
QuadrantCensus quadrant_census(const CensusBox& box, const ShellPotential& pot,
                               const ZeroSearchOptions& opts = {}, int jobs = 1);

const char* to_string(JostBranch which);
const char* to_string(Quadrant q);

}  // namespace shellres
