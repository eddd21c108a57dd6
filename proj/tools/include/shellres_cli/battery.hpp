#pragma once

// The acceptance battery: one numbered check per criterion, each reporting a
// measured value against a threshold.

#include <string>
#include <vector>

#include <shellres/serialize.hpp>

#include "shellres_cli/config.hpp"

namespace shellres::cli {

enum class RowStatus { pass, fail, inconclusive };

struct CriterionRow {
  int id = 0;
  std::string name;
  RowStatus status = RowStatus::fail;
  double measured = 0.0;
  /// Pass when `measured` compares to `threshold` as `relation` says.
  double threshold = 0.0;
  std::string relation;
  std::string detail;
};

struct BatteryOptions {
  double tolerance_scale = 1.0;
  int jobs = 1;
};

inline constexpr int kCriterionCount = 11;

const char* criterion_name(int id);

/// Runs the selected criteria in ascending order. Criterion 11 reruns the
/// other selected criteria and compares the serialized rows byte for byte.
std::vector<CriterionRow> run_battery(const ShellPotential& pot, const std::vector<int>& ids,
                                      const BatteryOptions& opts);

/// Local minima of |J+ J-| on an n x n grid over `region`, edges excluded.
int grid_minima_count(const SearchRegion& region, const ShellPotential& pot, int n = 400);

Json to_json(const CriterionRow& row);
std::string battery_csv(const std::vector<CriterionRow>& rows);
const char* to_string(RowStatus status);

}  // namespace shellres::cli
