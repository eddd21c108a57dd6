#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shellres_cli/config.hpp"

namespace shellres::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRefinement = 2,
  kExitInconclusive = 3,
  kExitCriterionFailed = 4,
};

/// Command-line overrides of the config's output block and job count.
struct Overrides {
  std::optional<std::string> output;
  std::optional<OutputFormat> format;
  bool no_timestamp = false;
  std::optional<int> jobs;
};

struct CommandResult {
  int exit_code = kExitOk;
  /// Report text in the requested format.
  std::string report;
  /// Diagnostics for stderr.
  std::vector<std::string> messages;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand. Library errors are mapped to exit codes; the report
/// is produced whenever there is data to report.
CommandResult run_command(const std::string& name, RunConfig cfg, const Overrides& overrides);

/// Loads the config, runs the command and writes the report to the output
/// path or stdout. Returns the process exit code.
int run_cli(const std::string& name, const std::string& config_path, const Overrides& overrides);

}  // namespace shellres::cli
