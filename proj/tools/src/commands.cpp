#include "shellres_cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <shellres/error.hpp>
#include <shellres/hardy.hpp>
#include <shellres/serialize.hpp>

#include "shellres_cli/battery.hpp"

namespace shellres::cli {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  const RunConfig& cfg;
  OutputFormat format;
  bool timestamp;
  int jobs;
  CommandResult result;

  Json header(const std::string& command) const {
    return Json{{"command", command}, {"potential", to_json(cfg.potential)}};
  }

  void finish(Json report, const std::string& csv) {
    if (format == OutputFormat::csv) {
      result.report = csv;
      return;
    }
    if (timestamp) report["generated_at"] = utc_timestamp();
    result.report = report.dump(2) + "\n";
  }

  void raise(int code) { result.exit_code = std::max(result.exit_code, code); }
};

std::vector<Resonance> of_branch(const std::vector<Resonance>& all, JostBranch which) {
  std::vector<Resonance> out;
  for (const auto& z : all) {
    if (z.which == which) out.push_back(z);
  }
  return out;
}

void cmd_resonances(Context& ctx) {
  const auto& block = ctx.cfg.resonances;
  ZeroSearchOptions opts;
  opts.residual_tol = block.residual_tol;
  Json report = ctx.header("resonances");
  Json errors = Json::array();

  QuadrantCensus census;
  bool have_census = false;
  try {
    census = quadrant_census(block.census, ctx.cfg.potential, opts, ctx.jobs);
    have_census = true;
  } catch (const RefinementError& e) {
    errors.push_back(e.what());
    ctx.raise(kExitRefinement);
  }

  std::vector<Resonance> plus;
  std::vector<Resonance> minus;
  if (block.region) {
    for (JostBranch which : {JostBranch::plus, JostBranch::minus}) {
      try {
        auto found = find_resonances(which, *block.region, ctx.cfg.potential, opts);
        (which == JostBranch::plus ? plus : minus) = std::move(found);
      } catch (const RefinementError& e) {
        errors.push_back(std::string(to_string(which)) + ": " + e.what());
        ctx.raise(kExitRefinement);
      }
    }
  } else if (have_census) {
    plus = of_branch(census.zeros, JostBranch::plus);
    minus = of_branch(census.zeros, JostBranch::minus);
  }

  Json box{{"re_extent", block.census.re_extent},
           {"im_extent", block.census.im_extent},
           {"axis_clearance", block.census.axis_clearance}};
  if (block.region) {
    report["region"] = Json{{"re_min", block.region->re_min},
                            {"re_max", block.region->re_max},
                            {"im_min", block.region->im_min},
                            {"im_max", block.region->im_max}};
  }
  report["census_box"] = box;
  report["census"] = have_census ? to_json(census) : Json(nullptr);
  report["zeros"] = Json{{"plus", to_json(std::span<const Resonance>(plus))},
                         {"minus", to_json(std::span<const Resonance>(minus))}};
  report["errors"] = errors;

  std::vector<Resonance> all = plus;
  all.insert(all.end(), minus.begin(), minus.end());
  ctx.finish(report, resonances_csv(all));
}

void cmd_jost_eval(Context& ctx) {
  Json report = ctx.header("jost-eval");
  Json points = Json::array();
  std::ostringstream csv;
  csv << "re_k,im_k,re_jplus,im_jplus,re_jminus,im_jminus\n";
  for (Complex k : ctx.cfg.jost_eval.points) {
    const JostPair j = jost(ComplexMomentum(k), ctx.cfg.potential);
    points.push_back(Json{{"re_k", k.real()},
                          {"im_k", k.imag()},
                          {"re_jplus", number_json(j.plus.real())},
                          {"im_jplus", number_json(j.plus.imag())},
                          {"re_jminus", number_json(j.minus.real())},
                          {"im_jminus", number_json(j.minus.imag())}});
    csv << format_double(k.real()) << ',' << format_double(k.imag()) << ','
        << format_double(j.plus.real()) << ',' << format_double(j.plus.imag()) << ','
        << format_double(j.minus.real()) << ',' << format_double(j.minus.imag()) << '\n';
  }
  report["points"] = points;
  ctx.finish(report, csv.str());
}

void cmd_chi_eval(Context& ctx) {
  const auto& block = ctx.cfg.chi_eval;
  const MatchingCoefficients c = solve_matching(ComplexMomentum(block.k), ctx.cfg.potential);
  Json report = ctx.header("chi-eval");
  report["re_k"] = block.k.real();
  report["im_k"] = block.k.imag();
  Json points = Json::array();
  std::ostringstream csv;
  csv << "r,re,im,abs\n";
  for (double r : block.r) {
    const Complex v = eval_chi(r, c);
    points.push_back(Json{{"r", r},
                          {"re", number_json(v.real())},
                          {"im", number_json(v.imag())},
                          {"abs", number_json(std::abs(v))}});
    csv << format_double(r) << ',' << format_double(v.real()) << ',' << format_double(v.imag())
        << ',' << format_double(std::abs(v)) << '\n';
  }
  report["points"] = points;
  ctx.finish(report, csv.str());
}

void cmd_transform(Context& ctx) {
  const auto& block = ctx.cfg.transform;
  const TestFunction f = block.test_function.build();
  const auto sample =
      transform(block.kind, f, block.energies, ctx.cfg.potential, block.tolerance, ctx.jobs);
  Json report = ctx.header("transform");
  report["test_function"] = f.describe();
  report["tolerance"] = block.tolerance;
  report["sample"] = to_json(sample);
  ctx.finish(report, transform_csv(sample));
}

void cmd_continue(Context& ctx) {
  const auto& block = ctx.cfg.continuation;
  const TestFunction f = block.test_function.build();
  std::vector<Resonance> table;
  if (block.zero_distances) {
    table = quadrant_census(CensusBox{}, ctx.cfg.potential, {}, ctx.jobs).zeros;
  }
  std::vector<ContinuationValue> values;
  for (Complex k : block.points) {
    values.push_back(continue_transform(block.kind, f, ComplexMomentum(k), ctx.cfg.potential, table));
  }
  Json report = ctx.header("continue");
  report["kind"] = to_string(block.kind);
  report["test_function"] = f.describe();
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(to_json(v));
  report["values"] = arr;
  ctx.finish(report, continuation_csv(values));
}

void cmd_arc_probe(Context& ctx) {
  const auto& block = ctx.cfg.arc_probe;
  const TestFunction f = block.test_function.build();
  Json report = ctx.header("arc-probe");
  report["test_function"] = f.describe();
  Json probes = Json::array();
  std::ostringstream csv;
  csv << "kind,ray_angle,radius,magnitude\n";
  for (EigenfunctionKind kind : block.kinds) {
    for (double angle : block.ray_angles) {
      const auto probe = arc_growth_probe(kind, f, angle, block.radii, ctx.cfg.potential);
      probes.push_back(to_json(probe));
      for (std::size_t i = 0; i < probe.radii.size(); ++i) {
        csv << to_string(kind) << ',' << format_double(angle) << ','
            << format_double(probe.radii[i]) << ',' << format_double(probe.magnitudes[i]) << '\n';
      }
    }
  }
  report["probes"] = probes;
  ctx.finish(report, csv.str());
}

void cmd_hardy_test(Context& ctx) {
  const auto& block = ctx.cfg.hardy;
  const auto grid = hardy_grid(block.e_max, block.points);
  Json report = ctx.header("hardy-test");
  report["e_max"] = block.e_max;
  report["points"] = block.points;
  Json cases = Json::array();
  std::ostringstream csv;
  csv << "name,class,negative_time_fraction,positive_time_fraction,status,edge_magnitude\n";
  for (const HardyCase& hc : block.cases) {
    std::vector<Complex> g;
    g.reserve(grid.size());
    for (double e : grid) {
      Complex v = 1.0;
      for (Complex p : hc.poles) v /= (e - p);
      g.push_back(v);
    }
    const HardyVerdict verdict = classify_hardy(g, block.e_max, block.threshold);
    if (verdict.status == CheckStatus::inconclusive) ctx.raise(kExitInconclusive);
    Json poles = Json::array();
    for (Complex p : hc.poles) poles.push_back(Json::array({p.real(), p.imag()}));
    Json entry{{"name", hc.name}, {"poles", poles}};
    entry["verdict"] = to_json(verdict);
    cases.push_back(entry);
    csv << hc.name << ',' << to_string(verdict.cls) << ','
        << format_double(verdict.negative_time_fraction) << ','
        << format_double(verdict.positive_time_fraction) << ',' << to_string(verdict.status)
        << ',' << format_double(verdict.edge_magnitude) << '\n';
  }
  report["cases"] = cases;
  ctx.finish(report, csv.str());
}

void cmd_gamow_pair(Context& ctx) {
  const auto& block = ctx.cfg.gamow;
  const ShellPotential& pot = ctx.cfg.potential;
  Resonance res{};
  if (block.resonance) {
    res = refine_zero(JostBranch::plus, *block.resonance, pot);
  } else {
    const auto census = quadrant_census(CensusBox{}, pot, {}, ctx.jobs);
    const Resonance* broad = nullptr;
    for (const auto& z : census.zeros) {
      if (z.which == JostBranch::plus && z.quadrant == Quadrant::IV &&
          (!broad || z.k_pole.imag() < broad->k_pole.imag())) {
        broad = &z;
      }
    }
    if (!broad) throw InvalidArgument("gamow_pair: no J+ zero in quadrant IV of the census box");
    res = *broad;
  }
  const GamowState state = GamowState::from_resonance(res, pot);
  const auto limits =
      uniform_limits(block.r_start.value_or(pot.b() + 2.0), block.r_step, block.count);

  Json report = ctx.header("gamow-pair");
  report["resonance"] = to_json(res);
  report["growth_rate"] = state.growth_rate();
  Json runs = Json::array();
  std::ostringstream csv;
  csv << "alpha,R,re,im,verdict,measured_exponent\n";
  for (double ratio : block.alpha_ratios) {
    const double alpha = ratio * state.growth_rate();
    const auto rep = gamow_pair(TestFunction::exp_decay(alpha), state, limits);
    Json entry{{"alpha_ratio", ratio}, {"alpha", alpha}};
    entry["pairing"] = to_json(rep);
    runs.push_back(entry);
    for (std::size_t i = 0; i < rep.r_limits.size(); ++i) {
      csv << format_double(alpha) << ',' << format_double(rep.r_limits[i]) << ','
          << format_double(rep.partial[i].real()) << ',' << format_double(rep.partial[i].imag())
          << ',' << to_string(rep.verdict) << ',' << format_double(rep.measured_exponent) << '\n';
    }
  }
  report["runs"] = runs;
  ctx.finish(report, csv.str());
}

void cmd_evolve(Context& ctx) {
  const auto& block = ctx.cfg.evolve;
  const TestFunction f = block.test_function.build();
  const auto sample =
      transform(block.kind, f, block.energies, ctx.cfg.potential, block.tolerance, ctx.jobs);
  Json report = ctx.header("evolve");
  report["test_function"] = f.describe();
  Json frames = Json::array();
  std::ostringstream csv;
  csv << "t,E,re,im,abs,quad_err\n";
  for (double t : block.times) {
    const auto evolved = evolve_energy_rep(sample, t);
    frames.push_back(Json{{"t", t}, {"sample", to_json(evolved)}});
    std::istringstream rows(transform_csv(evolved));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) csv << format_double(t) << ',' << line << '\n';
  }
  report["frames"] = frames;
  ctx.finish(report, csv.str());
}

void cmd_reproduce(Context& ctx) {
  BatteryOptions opts;
  opts.tolerance_scale = ctx.cfg.reproduce.tolerance_scale;
  opts.jobs = ctx.jobs;
  const auto rows = run_battery(ctx.cfg.potential, ctx.cfg.reproduce.criteria, opts);
  bool failed = false;
  bool inconclusive = false;
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(to_json(r));
    failed = failed || r.status == RowStatus::fail;
    inconclusive = inconclusive || r.status == RowStatus::inconclusive;
  }
  if (inconclusive) {
    ctx.raise(kExitInconclusive);
  } else if (failed) {
    ctx.raise(kExitCriterionFailed);
  }
  Json report = ctx.header("reproduce");
  report["tolerance_scale"] = ctx.cfg.reproduce.tolerance_scale;
  report["rows"] = arr;
  ctx.finish(report, battery_csv(rows));
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "resonances", "jost-eval",  "chi-eval", "transform", "continue",
      "arc-probe",  "hardy-test", "gamow-pair", "evolve",  "reproduce"};
  return names;
}

CommandResult run_command(const std::string& name, RunConfig cfg, const Overrides& overrides) {
  if (overrides.format) cfg.output.format = *overrides.format;
  if (overrides.jobs) cfg.jobs = *overrides.jobs;
  Context ctx{cfg, cfg.output.format, cfg.output.timestamp && !overrides.no_timestamp,
              std::max(1, cfg.jobs), {}};
  try {
    if (name == "resonances") {
      cmd_resonances(ctx);
    } else if (name == "jost-eval") {
      cmd_jost_eval(ctx);
    } else if (name == "chi-eval") {
      cmd_chi_eval(ctx);
    } else if (name == "transform") {
      cmd_transform(ctx);
    } else if (name == "continue") {
      cmd_continue(ctx);
    } else if (name == "arc-probe") {
      cmd_arc_probe(ctx);
    } else if (name == "hardy-test") {
      cmd_hardy_test(ctx);
    } else if (name == "gamow-pair") {
      cmd_gamow_pair(ctx);
    } else if (name == "evolve") {
      cmd_evolve(ctx);
    } else if (name == "reproduce") {
      cmd_reproduce(ctx);
    } else {
      ctx.result.messages.push_back("unknown command: " + name);
      ctx.raise(kExitConfig);
    }
  } catch (const RefinementError& e) {
    ctx.result.messages.push_back(e.what());
    ctx.raise(kExitRefinement);
  } catch (const QuadratureError& e) {
    ctx.result.messages.push_back(e.what());
    ctx.raise(kExitInconclusive);
  } catch (const Error& e) {
    // Invalid input that only shows up once evaluated (k = 0, divergent overlaps).
    ctx.result.messages.push_back(cfg.source + ": " + e.what());
    ctx.raise(kExitConfig);
  }
  return ctx.result;
}

int run_cli(const std::string& name, const std::string& config_path, const Overrides& overrides) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const CommandResult result = run_command(name, cfg, overrides);
  for (const auto& m : result.messages) std::cerr << "error: " << m << '\n';
  if (!result.report.empty()) {
    const std::optional<std::string> path = overrides.output ? overrides.output : cfg.output.path;
    if (path) {
      std::ofstream out(*path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << *path << '\n';
        return kExitConfig;
      }
      out << result.report;
    } else {
      std::cout << result.report;
    }
  }
  return result.exit_code;
}

}  // namespace shellres::cli
