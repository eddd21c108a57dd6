#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <shellres/serialize.hpp>

#include "shellres_cli/battery.hpp"
#include "shellres_cli/commands.hpp"
#include "shellres_cli/config.hpp"

namespace shellres::cli {
namespace {

using shellres::Json;

constexpr const char* kBase = R"(potential: {a: 1.0, b: 2.0, v0: 10.0}
output: {timestamp: false}
)";

Overrides quiet() {
  Overrides o;
  o.no_timestamp = true;
  return o;
}

TEST(Config, DefaultsAndPotential) {
  const RunConfig cfg = parse_config(kBase, "inline.yaml");
  EXPECT_DOUBLE_EQ(cfg.potential.b(), 2.0);
  EXPECT_EQ(cfg.output.format, OutputFormat::json);
  EXPECT_FALSE(cfg.output.timestamp);
  EXPECT_EQ(cfg.reproduce.criteria.size(), 11u);
  EXPECT_EQ(cfg.hardy.points, 4096);
}

TEST(Config, UnknownKeyNamesLine) {
  const std::string text = std::string(kBase) + "transfrom: {kind: sw}\n";
  try {
    parse_config(text, "bad.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad.yaml:3:"), std::string::npos) << what;
    EXPECT_NE(what.find("transfrom"), std::string::npos) << what;
  }
}

TEST(Config, MissingPotentialRejected) {
  EXPECT_THROW(parse_config("jobs: 2\n", "x.yaml"), ConfigError);
}

TEST(Config, InvalidShellOrdering) {
  try {
    parse_config("potential: {a: 2.0, b: 1.0, v0: 10.0}\n", "shell.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("0 < a < b"), std::string::npos) << e.what();
  }
}

TEST(Config, EnergyGridForms) {
  const std::string text = std::string(kBase) +
                           "transform:\n  kind: plus\n  energies: {k_max: 4.0, count: 8}\n";
  const RunConfig cfg = parse_config(text, "t.yaml");
  ASSERT_EQ(cfg.transform.energies.size(), 8u);
  EXPECT_NEAR(cfg.transform.energies.back(), 16.0, 1e-12);
  const RunConfig listed = parse_config(std::string(kBase) + "transform: {energies: [1.0, 2.5]}\n", "t.yaml");
  EXPECT_EQ(listed.transform.energies, (std::vector<double>{1.0, 2.5}));
}

TEST(Commands, FreeParticleHasNoZeros) {
  const RunConfig cfg = parse_config("potential: {a: 1.0, b: 2.0, v0: 0.0}\n", "free.yaml");
  const auto result = run_command("resonances", cfg, quiet());
  EXPECT_EQ(result.exit_code, kExitOk);
  const Json report = Json::parse(result.report);
  EXPECT_TRUE(report["zeros"]["plus"].empty());
  EXPECT_TRUE(report["zeros"]["minus"].empty());
  EXPECT_FALSE(report.contains("generated_at"));
}

TEST(Commands, ResonancesOnShell) {
  const RunConfig cfg = parse_config(kBase, "shell.yaml");
  const auto result = run_command("resonances", cfg, quiet());
  ASSERT_EQ(result.exit_code, kExitOk);
  const Json report = Json::parse(result.report);
  EXPECT_EQ(report["command"], "resonances");
  for (const char* q : {"I", "II", "III", "IV"}) EXPECT_EQ(report["census"]["counts"][q], 3) << q;
  EXPECT_EQ(report["zeros"]["plus"].size(), 6u);
}

TEST(Commands, EmptyCriteriaList) {
  const RunConfig cfg = parse_config(std::string(kBase) + "reproduce: {criteria: []}\n", "r.yaml");
  const auto result = run_command("reproduce", cfg, quiet());
  EXPECT_EQ(result.exit_code, kExitOk);
  EXPECT_TRUE(Json::parse(result.report)["rows"].empty());
}

TEST(Commands, CsvFormat) {
  RunConfig cfg = parse_config(kBase, "j.yaml");
  Overrides o = quiet();
  o.format = OutputFormat::csv;
  const auto result = run_command("jost-eval", cfg, o);
  ASSERT_EQ(result.exit_code, kExitOk);
  std::istringstream in(result.report);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "re_k,im_k,re_jplus,im_jplus,re_jminus,im_jminus");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST(Commands, TimestampOnRequest) {
  RunConfig cfg = parse_config(kBase, "j.yaml");
  cfg.output.timestamp = true;
  const auto stamped = run_command("jost-eval", cfg, Overrides{});
  EXPECT_TRUE(Json::parse(stamped.report).contains("generated_at"));
}

TEST(Commands, DivergentContinuationIsConfigError) {
  const RunConfig cfg = parse_config(std::string(kBase) +
                                         "continue:\n  kind: sw\n"
                                         "  test_function: {form: exp_decay, parameter: 0.5}\n"
                                         "  points: [[2.0, -1.0]]\n",
                                     "c.yaml");
  const auto result = run_command("continue", cfg, quiet());
  EXPECT_EQ(result.exit_code, kExitConfig);
  ASSERT_FALSE(result.messages.empty());
}

TEST(Commands, HardyDefaults) {
  const RunConfig cfg = parse_config(kBase, "h.yaml");
  const auto result = run_command("hardy-test", cfg, quiet());
  ASSERT_EQ(result.exit_code, kExitOk);
  const Json report = Json::parse(result.report);
  ASSERT_EQ(report["cases"].size(), 3u);
}

TEST(Commands, UnknownCommand) {
  const RunConfig cfg = parse_config(kBase, "u.yaml");
  EXPECT_EQ(run_command("frobnicate", cfg, quiet()).exit_code, kExitConfig);
}

TEST(Battery, GridOracleMatchesCensusQuadrants) {
  const ShellPotential pot(1.0, 2.0, 10.0);
  const auto regions = quadrant_regions(CensusBox{});
  for (const auto& region : regions) {
    EXPECT_EQ(grid_minima_count(region, pot), 3);
  }
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(SHELLRES_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TEST(Binary, ExitCodes) {
  const std::string bad = write_temp("shellres_bad_shell.yaml", "potential: {a: 2.0, b: 1.0, v0: 10.0}\n");
  EXPECT_EQ(run_tool("resonances --config " + bad), 1);
  EXPECT_EQ(run_tool("resonances --config /nonexistent/x.yaml"), 1);
  EXPECT_EQ(run_tool("resonances"), 1);
  const std::string ok = write_temp("shellres_ok.yaml", "potential: {a: 1.0, b: 2.0, v0: 10.0}\n");
  EXPECT_EQ(run_tool("jost-eval --config " + ok + " --no-timestamp"), 0);
}

}  // namespace
}  // namespace shellres::cli
