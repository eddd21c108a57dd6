#pragma once

// Run configuration for the shellres command-line tool, read from YAML.
// The full schema with defaults lives in docs/config.md.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <shellres/hardy.hpp>
#include <shellres/resonances.hpp>
#include <shellres/spectral.hpp>
#include <shellres/test_function.hpp>

namespace shellres::cli {

/// Schema violation. what() is "<source>:<line>:<column>: <key>: <message>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv };

struct TestFunctionSpec {
  TestFunctionForm form = TestFunctionForm::exp_decay;
  double parameter = 1.0;
  std::vector<double> coefficients{1.0};

  TestFunction build() const;
};

struct OutputBlock {
  OutputFormat format = OutputFormat::json;
  std::optional<std::string> path;
  bool timestamp = true;
};

struct ResonancesBlock {
  /// Searched for both Jost functions when given; otherwise the zeros come
  /// from the census rectangles.
  std::optional<SearchRegion> region;
  CensusBox census;
  double residual_tol = 1e-10;
};

struct JostEvalBlock {
  std::vector<Complex> points;
};

struct ChiEvalBlock {
  Complex k{1.0, 0.0};
  std::vector<double> r;
};

struct TransformBlock {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  TestFunctionSpec test_function;
  std::vector<double> energies;
  double tolerance = 1e-10;
};

struct ContinueBlock {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  TestFunctionSpec test_function;
  std::vector<Complex> points;
  /// Attach distances to the census zeros of the default box.
  bool zero_distances = true;
};

struct ArcProbeBlock {
  std::vector<EigenfunctionKind> kinds{EigenfunctionKind::sw, EigenfunctionKind::plus};
  TestFunctionSpec test_function;
  std::vector<double> ray_angles;
  std::vector<double> radii{2.0, 4.0, 8.0, 16.0};
};

struct HardyCase {
  std::string name;
  /// g(E) = prod_i 1 / (E - p_i).
  std::vector<Complex> poles;
};

struct HardyBlock {
  double e_max = 50.0;
  int points = 4096;
  double threshold = 1e-3;
  std::vector<HardyCase> cases;
};

struct GamowBlock {
  /// Starting guess for the J+ zero; the broadest quadrant-IV census zero
  /// when absent.
  std::optional<Complex> resonance;
  std::vector<double> alpha_ratios{0.5, 0.9, 1.1, 2.0};
  std::optional<double> r_start;
  double r_step = 2.0;
  int count = 20;
};

struct EvolveBlock {
  EigenfunctionKind kind = EigenfunctionKind::sw;
  TestFunctionSpec test_function;
  std::vector<double> energies;
  std::vector<double> times{0.0, 1.0};
  double tolerance = 1e-10;
};

struct ReproduceBlock {
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  /// Multiplies every tolerance-type threshold.
  double tolerance_scale = 1.0;
};

struct RunConfig {
  std::string source;
  ShellPotential potential{1.0, 2.0, 10.0};
  OutputBlock output;
  int jobs = 1;
  ResonancesBlock resonances;
  JostEvalBlock jost_eval;
  ChiEvalBlock chi_eval;
  TransformBlock transform;
  ContinueBlock continuation;
  ArcProbeBlock arc_probe;
  HardyBlock hardy;
  GamowBlock gamow;
  EvolveBlock evolve;
  ReproduceBlock reproduce;
};

/// Parses YAML text; `source` names the origin in error messages.
RunConfig parse_config(const std::string& text, const std::string& source);
RunConfig load_config(const std::string& path);

/// The three rational cases used by the classifier sanity check.
std::vector<HardyCase> default_hardy_cases();

const char* to_string(OutputFormat format);

}  // namespace shellres::cli
