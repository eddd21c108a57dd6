#include <CLI11.hpp>

#include <map>

#include "shellres_cli/commands.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions = {
    {"resonances", "Jost-function zeros in a region and the quadrant census"},
    {"jost-eval", "J+ and J- at the configured complex momenta"},
    {"chi-eval", "Regular solution at the configured radii"},
    {"transform", "Energy representation (U f)(E) on a real energy grid"},
    {"continue", "Analytic continuation of (U f) to complex momenta"},
    {"arc-probe", "Growth of the continued transform along rays"},
    {"hardy-test", "Paley-Wiener classification of rational test functions"},
    {"gamow-pair", "Partial pairings of exponentially decaying functions with a Gamow state"},
    {"evolve", "Energy representation multiplied by e^{-iEt}"},
    {"reproduce", "Acceptance battery, one row per criterion"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace shellres::cli;
  CLI::App app{"shellres: resonances and spectral transforms of the spherical shell potential"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::string format;
  bool no_timestamp = false;
  int jobs = 0;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--output", output, "Report path (stdout when omitted)");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the generated_at field");
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  Overrides overrides;
  if (!output.empty()) overrides.output = output;
  if (!format.empty()) overrides.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  overrides.no_timestamp = no_timestamp;
  if (jobs > 0) overrides.jobs = jobs;
  return run_cli(app.get_subcommands().front()->get_name(), config_path, overrides);
}
