// Acceptance driver: runs the numbered criteria and prints one line each.
//
//   shellres_acceptance [--only N]... [--tool PATH] [--config PATH]
//
// Criteria 1-10 run in-process through the battery. Criterion 11 launches
// the command-line tool twice on an identical reproduce configuration and
// compares the two reports byte for byte.

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "shellres_cli/battery.hpp"
#include "shellres_cli/config.hpp"

namespace {

using shellres::cli::CriterionRow;
using shellres::cli::RowStatus;

struct Capture {
  int exit_code = -1;
  std::string out;
};

Capture capture(const std::string& command) {
  Capture c;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
  const int status = pclose(pipe);
  c.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

CriterionRow determinism(const std::string& tool, const std::string& config) {
  CriterionRow row;
  row.id = 11;
  row.name = shellres::cli::criterion_name(11);
  row.relation = "==";
  row.threshold = 0.0;

  // Rerun everything except the determinism row itself.
  shellres::cli::RunConfig cfg = shellres::cli::load_config(config);
  const auto& pot = cfg.potential;
  std::ostringstream yaml;
  yaml.precision(17);
  yaml << "potential: {a: " << pot.a() << ", b: " << pot.b() << ", v0: " << pot.v0() << "}\n"
       << "units: {hbar: " << pot.units().hbar() << ", mass: " << pot.units().mass() << "}\n"
       << "output: {format: json, timestamp: false}\n"
       << "jobs: " << cfg.jobs << "\n"
       << "reproduce:\n  criteria: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]\n"
       << "  tolerance_scale: " << cfg.reproduce.tolerance_scale << "\n";
  const auto path = std::filesystem::temp_directory_path() / "shellres_determinism.yaml";
  std::ofstream(path) << yaml.str();

  const std::string command = tool + " reproduce --no-timestamp --config " + path.string() + " 2>/dev/null";
  const Capture first = capture(command);
  const Capture second = capture(command);
  std::filesystem::remove(path);

  if (first.out.empty() || first.exit_code < 0 || first.exit_code == 1) {
    row.status = RowStatus::inconclusive;
    row.measured = 1.0;
    row.detail = "tool run failed with exit code " + std::to_string(first.exit_code);
    return row;
  }
  std::size_t differing = 0;
  const std::size_t common = std::min(first.out.size(), second.out.size());
  for (std::size_t i = 0; i < common; ++i) differing += first.out[i] != second.out[i];
  differing += std::max(first.out.size(), second.out.size()) - common;
  row.measured = static_cast<double>(differing);
  row.status = differing == 0 && first.exit_code == second.exit_code ? RowStatus::pass : RowStatus::fail;
  row.detail = std::to_string(first.out.size()) + " report bytes, " + std::to_string(differing) +
               " differing, exit codes " + std::to_string(first.exit_code) + "/" +
               std::to_string(second.exit_code);
  return row;
}

void print(const CriterionRow& row) {
  std::cout << "criterion " << (row.id < 10 ? " " : "") << row.id << "  "
            << (row.status == RowStatus::pass   ? "PASS"
                : row.status == RowStatus::fail ? "FAIL"
                                                : "INCONCLUSIVE")
            << "  " << row.name << "  measured=" << shellres::format_double(row.measured) << ' '
            << row.relation << ' ' << shellres::format_double(row.threshold);
  if (!row.detail.empty()) std::cout << "  (" << row.detail << ')';
  std::cout << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shellres acceptance criteria"};
  std::vector<int> only;
  std::string tool = SHELLRES_TOOL_PATH;
  std::string config = SHELLRES_DEFAULT_CONFIG;
  app.add_option("--only", only, "Run only these criteria")
      ->check(CLI::Range(1, shellres::cli::kCriterionCount));
  app.add_option("--tool", tool, "Path to the shellres executable");
  app.add_option("--config", config, "Configuration supplying the potential")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  std::set<int> ids(only.begin(), only.end());
  if (ids.empty()) {
    for (int i = 1; i <= shellres::cli::kCriterionCount; ++i) ids.insert(i);
  }

  const shellres::cli::RunConfig cfg = shellres::cli::load_config(config);
  shellres::cli::BatteryOptions opts;
  opts.tolerance_scale = cfg.reproduce.tolerance_scale;
  opts.jobs = cfg.jobs;

  bool all_pass = true;
  for (int id : ids) {
    const CriterionRow row = id == 11 ? determinism(tool, config)
                                      : shellres::cli::run_battery(cfg.potential, {id}, opts).at(0);
    print(row);
    all_pass = all_pass && row.status == RowStatus::pass;
  }
  return all_pass ? 0 : 1;
}
