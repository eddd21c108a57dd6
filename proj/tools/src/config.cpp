#include "shellres_cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <shellres/error.hpp>

namespace shellres::cli {
namespace {

// A mapping node together with its dotted key path, for error reporting.
class Block {
 public:
  Block(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (!node_.IsMap()) fail(node_, "expected a mapping");
  }

  const std::string& path() const { return path_; }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& entry : node_) {
      const auto key = entry.first.as<std::string>();
      if (!allowed.contains(key)) {
        std::string list;
        for (const auto& k : allowed) list += (list.empty() ? "" : ", ") + k;
        fail(entry.first, join(key), "unknown key (allowed: " + list + ")");
      }
    }
  }

  bool has(const char* key) const { return static_cast<bool>(node_[key]); }
  YAML::Node at(const char* key) const { return node_[key]; }
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  Block child(const char* key) const { return Block(node_[key], join(key), source_); }

  double number(const char* key, double fallback) const {
    return has(key) ? as_number(node_[key], join(key)) : fallback;
  }
  double required_number(const char* key) const {
    if (!has(key)) fail(node_, join(key), "required key is missing");
    return as_number(node_[key], join(key));
  }
  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = as_number(node_[key], join(key));
    if (v != static_cast<int>(v)) fail(node_[key], join(key), "expected an integer");
    return static_cast<int>(v);
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    try {
      return node_[key].as<bool>();
    } catch (const YAML::Exception&) {
      fail(node_[key], join(key), "expected true or false");
    }
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const YAML::Node n = node_[key];
    if (!n.IsScalar()) fail(n, join(key), "expected a string");
    return n.as<std::string>();
  }
  std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const YAML::Node n = node_[key];
    if (!n.IsSequence()) fail(n, join(key), "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      out.push_back(as_number(n[i], join(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
  Complex complex_value(const YAML::Node& n, const std::string& where) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, where, "expected [re, im]");
    return {as_number(n[0], where + "[0]"), as_number(n[1], where + "[1]")};
  }
  std::vector<Complex> complex_list(const char* key, std::vector<Complex> fallback) const {
    if (!has(key)) return fallback;
    const YAML::Node n = node_[key];
    if (!n.IsSequence()) fail(n, join(key), "expected a list of [re, im] pairs");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      out.push_back(complex_value(n[i], join(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    fail(at, path_.empty() ? std::string("<root>") : path_, message);
  }
  [[noreturn]] void fail(const YAML::Node& at, const std::string& key,
                         const std::string& message) const {
    const YAML::Mark mark = at.Mark();
    std::ostringstream out;
    out << source_ << ':' << (mark.is_null() ? 0 : mark.line + 1) << ':'
        << (mark.is_null() ? 0 : mark.column + 1) << ": " << key << ": " << message;
    throw ConfigError(out.str());
  }

 private:
  double as_number(const YAML::Node& n, const std::string& where) const {
    if (!n.IsScalar()) fail(n, where, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, where, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  const std::string& source_;
};

EigenfunctionKind parse_kind(const Block& parent, const char* key, EigenfunctionKind fallback) {
  if (!parent.has(key)) return fallback;
  const std::string s = parent.string(key, "");
  if (s == "sw") return EigenfunctionKind::sw;
  if (s == "plus") return EigenfunctionKind::plus;
  if (s == "minus") return EigenfunctionKind::minus;
  parent.fail(parent.at(key), parent.join(key), "expected one of sw, plus, minus");
}

std::vector<EigenfunctionKind> parse_kinds(const Block& parent, const char* key,
                                           std::vector<EigenfunctionKind> fallback) {
  if (!parent.has(key)) return fallback;
  const YAML::Node n = parent.at(key);
  if (!n.IsSequence() || n.size() == 0) {
    parent.fail(n, parent.join(key), "expected a non-empty list of kinds");
  }
  std::vector<EigenfunctionKind> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string s = n[i].IsScalar() ? n[i].as<std::string>() : "";
    if (s == "sw") {
      out.push_back(EigenfunctionKind::sw);
    } else if (s == "plus") {
      out.push_back(EigenfunctionKind::plus);
    } else if (s == "minus") {
      out.push_back(EigenfunctionKind::minus);
    } else {
      parent.fail(n[i], parent.join(key), "expected one of sw, plus, minus");
    }
  }
  return out;
}

TestFunctionSpec parse_test_function(const Block& parent, const char* key,
                                     TestFunctionSpec fallback) {
  if (!parent.has(key)) return fallback;
  const Block b = parent.child(key);
  b.allow({"form", "parameter", "coefficients"});
  TestFunctionSpec spec;
  const std::string form = b.string("form", "exp_decay");
  if (form == "exp_decay") {
    spec.form = TestFunctionForm::exp_decay;
  } else if (form == "gaussian") {
    spec.form = TestFunctionForm::gaussian;
  } else if (form == "smooth_bump") {
    spec.form = TestFunctionForm::smooth_bump;
  } else {
    b.fail(b.at("form"), b.join("form"), "expected one of exp_decay, gaussian, smooth_bump");
  }
  spec.parameter = b.number("parameter", 1.0);
  spec.coefficients = b.numbers("coefficients", {1.0});
  try {
    (void)spec.build();
  } catch (const InvalidArgument& e) {
    b.fail(parent.at(key), e.what());
  }
  return spec;
}

std::vector<double> parse_energies(const Block& parent, const char* key,
                                   const UnitSystem& units) {
  if (!parent.has(key)) return standard_real_axis_energies(units);
  const YAML::Node n = parent.at(key);
  std::vector<double> out;
  if (n.IsMap()) {
    const Block b = parent.child(key);
    b.allow({"k_max", "count"});
    const double k_max = b.number("k_max", 6.0);
    const int count = b.integer("count", 50);
    if (!(k_max > 0.0) || count < 1) b.fail(n, "requires k_max > 0 and count >= 1");
    out = standard_real_axis_energies(units, count, k_max);
  } else {
    out = parent.numbers(key, {});
    if (out.empty()) parent.fail(n, parent.join(key), "energy list is empty");
  }
  for (double e : out) {
    if (!(e > 0.0)) parent.fail(n, parent.join(key), "energies must be positive");
  }
  return out;
}

void require_positive(const Block& b, const char* key, double value) {
  if (!(value > 0.0)) b.fail(b.at(key), b.join(key), "must be positive");
}

}  // namespace

TestFunction TestFunctionSpec::build() const {
  switch (form) {
    case TestFunctionForm::exp_decay: return TestFunction::exp_decay(parameter, coefficients);
    case TestFunctionForm::gaussian: return TestFunction::gaussian(parameter, coefficients);
    case TestFunctionForm::smooth_bump: return TestFunction::smooth_bump(parameter, coefficients);
  }
  throw InvalidArgument("unknown test function form");
}

std::vector<HardyCase> default_hardy_cases() {
  return {{"inv_e_plus_i", {Complex(0.0, -1.0)}},
          {"inv_e_minus_i", {Complex(0.0, 1.0)}},
          {"inv_e2_plus_1", {Complex(0.0, 1.0), Complex(0.0, -1.0)}}};
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream out;
    out << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(out.str());
  }
  if (!root || root.IsNull()) throw ConfigError(source + ":1:1: <root>: empty configuration");

  RunConfig cfg;
  cfg.source = source;
  const Block top(root, "", source);
  top.allow({"potential", "units", "output", "jobs", "resonances", "jost_eval", "chi_eval",
             "transform", "continue", "arc_probe", "hardy_test", "gamow_pair", "evolve",
             "reproduce"});

  if (!top.has("potential")) top.fail(root, "potential", "required key is missing");
  const Block pot = top.child("potential");
  pot.allow({"a", "b", "v0"});
  UnitSystem units;
  if (top.has("units")) {
    const Block u = top.child("units");
    u.allow({"hbar", "mass"});
    try {
      units = UnitSystem(u.number("hbar", 1.0), u.number("mass", 0.5));
    } catch (const InvalidArgument& e) {
      u.fail(top.at("units"), e.what());
    }
  }
  try {
    cfg.potential = ShellPotential(pot.required_number("a"), pot.required_number("b"),
                                   pot.required_number("v0"), units);
  } catch (const InvalidArgument& e) {
    pot.fail(top.at("potential"), e.what());
  }

  if (top.has("output")) {
    const Block o = top.child("output");
    o.allow({"format", "path", "timestamp"});
    const std::string fmt = o.string("format", "json");
    if (fmt == "json") {
      cfg.output.format = OutputFormat::json;
    } else if (fmt == "csv") {
      cfg.output.format = OutputFormat::csv;
    } else {
      o.fail(o.at("format"), o.join("format"), "expected json or csv");
    }
    if (o.has("path")) cfg.output.path = o.string("path", "");
    cfg.output.timestamp = o.boolean("timestamp", true);
  }
  cfg.jobs = top.integer("jobs", 1);
  if (cfg.jobs < 1) top.fail(top.at("jobs"), "jobs", "must be at least 1");

  if (top.has("resonances")) {
    const Block r = top.child("resonances");
    r.allow({"region", "census", "residual_tol"});
    if (r.has("region")) {
      const Block g = r.child("region");
      g.allow({"re_min", "re_max", "im_min", "im_max"});
      try {
        cfg.resonances.region =
            SearchRegion::make(g.required_number("re_min"), g.required_number("re_max"),
                               g.required_number("im_min"), g.required_number("im_max"));
      } catch (const InvalidArgument& e) {
        g.fail(r.at("region"), e.what());
      }
    }
    if (r.has("census")) {
      const Block c = r.child("census");
      c.allow({"re_extent", "im_extent", "axis_clearance"});
      cfg.resonances.census.re_extent = c.number("re_extent", 6.0);
      cfg.resonances.census.im_extent = c.number("im_extent", 2.0);
      cfg.resonances.census.axis_clearance = c.number("axis_clearance", 1e-3);
      const auto& box = cfg.resonances.census;
      if (!(box.axis_clearance > 0.0 && box.re_extent > box.axis_clearance &&
            box.im_extent > box.axis_clearance)) {
        c.fail(r.at("census"), "requires 0 < axis_clearance < re_extent, im_extent");
      }
    }
    cfg.resonances.residual_tol = r.number("residual_tol", 1e-10);
    if (r.has("residual_tol")) require_positive(r, "residual_tol", cfg.resonances.residual_tol);
  }

  if (top.has("jost_eval")) {
    const Block j = top.child("jost_eval");
    j.allow({"points"});
    cfg.jost_eval.points = j.complex_list("points", {});
  }
  if (cfg.jost_eval.points.empty()) {
    cfg.jost_eval.points = {Complex(1.0, 0.0), Complex(3.0, -0.5), Complex(3.0, 0.5)};
  }

  if (top.has("chi_eval")) {
    const Block c = top.child("chi_eval");
    c.allow({"k", "r"});
    if (c.has("k")) cfg.chi_eval.k = c.complex_value(c.at("k"), c.join("k"));
    cfg.chi_eval.r = c.numbers("r", {});
    for (double r : cfg.chi_eval.r) {
      if (!(r >= 0.0)) c.fail(c.at("r"), c.join("r"), "radii must be non-negative");
    }
  }
  if (cfg.chi_eval.r.empty()) cfg.chi_eval.r = {0.5, 1.5, 3.0};

  cfg.transform.energies = standard_real_axis_energies(units);
  if (top.has("transform")) {
    const Block t = top.child("transform");
    t.allow({"kind", "test_function", "energies", "tolerance"});
    cfg.transform.kind = parse_kind(t, "kind", EigenfunctionKind::sw);
    cfg.transform.test_function = parse_test_function(t, "test_function", {});
    cfg.transform.energies = parse_energies(t, "energies", units);
    cfg.transform.tolerance = t.number("tolerance", 1e-10);
    if (t.has("tolerance")) require_positive(t, "tolerance", cfg.transform.tolerance);
  }

  if (top.has("continue")) {
    const Block c = top.child("continue");
    c.allow({"kind", "test_function", "points", "zero_distances"});
    cfg.continuation.kind = parse_kind(c, "kind", EigenfunctionKind::sw);
    cfg.continuation.test_function = parse_test_function(c, "test_function", {});
    cfg.continuation.points = c.complex_list("points", {});
    cfg.continuation.zero_distances = c.boolean("zero_distances", true);
  }
  if (cfg.continuation.points.empty()) {
    cfg.continuation.points = {Complex(2.0, 0.0), Complex(2.0, -0.5), Complex(2.0, 0.5)};
  }

  cfg.arc_probe.test_function = {TestFunctionForm::smooth_bump, 3.0, {1.0}};
  cfg.arc_probe.ray_angles = {kPi / 4, -kPi / 4, 3 * kPi / 4, -3 * kPi / 4};
  if (top.has("arc_probe")) {
    const Block a = top.child("arc_probe");
    a.allow({"kinds", "test_function", "ray_angles", "radii"});
    cfg.arc_probe.kinds = parse_kinds(a, "kinds", cfg.arc_probe.kinds);
    cfg.arc_probe.test_function = parse_test_function(a, "test_function", cfg.arc_probe.test_function);
    if (cfg.arc_probe.test_function.form != TestFunctionForm::smooth_bump) {
      a.fail(a.at("test_function"), a.join("test_function"),
             "arc probes need a compactly supported test function (smooth_bump)");
    }
    cfg.arc_probe.ray_angles = a.numbers("ray_angles", cfg.arc_probe.ray_angles);
    cfg.arc_probe.radii = a.numbers("radii", cfg.arc_probe.radii);
    if (cfg.arc_probe.radii.empty()) a.fail(a.at("radii"), a.join("radii"), "empty list");
    for (std::size_t i = 0; i < cfg.arc_probe.radii.size(); ++i) {
      if (!(cfg.arc_probe.radii[i] > 0.0) ||
          (i > 0 && !(cfg.arc_probe.radii[i] > cfg.arc_probe.radii[i - 1]))) {
        a.fail(a.at("radii"), a.join("radii"), "radii must be positive and strictly increasing");
      }
    }
    for (double angle : cfg.arc_probe.ray_angles) {
      if (std::abs(std::sin(angle)) < std::sin(kPi / 16) - 1e-12) {
        a.fail(a.at("ray_angles"), a.join("ray_angles"),
               "every ray must stay pi/16 away from the real axis");
      }
    }
  }

  cfg.hardy.cases = default_hardy_cases();
  if (top.has("hardy_test")) {
    const Block h = top.child("hardy_test");
    h.allow({"e_max", "points", "threshold", "cases"});
    cfg.hardy.e_max = h.number("e_max", 50.0);
    cfg.hardy.points = h.integer("points", 4096);
    cfg.hardy.threshold = h.number("threshold", 1e-3);
    if (!(cfg.hardy.e_max > 0.0)) h.fail(h.at("e_max"), h.join("e_max"), "must be positive");
    if (cfg.hardy.points < 1024) {
      h.fail(h.at("points"), h.join("points"), "at least 1024 grid points are required");
    }
    if (!(cfg.hardy.threshold > 0.0 && cfg.hardy.threshold < 0.5)) {
      h.fail(h.at("threshold"), h.join("threshold"), "must lie in (0, 0.5)");
    }
    if (h.has("cases")) {
      const YAML::Node list = h.at("cases");
      if (!list.IsSequence()) h.fail(list, h.join("cases"), "expected a list of cases");
      cfg.hardy.cases.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        const Block c(list[i], h.join("cases") + "[" + std::to_string(i) + "]", source);
        c.allow({"name", "poles"});
        HardyCase hc;
        hc.name = c.string("name", "case" + std::to_string(i));
        hc.poles = c.complex_list("poles", {});
        for (Complex p : hc.poles) {
          if (p.imag() == 0.0) c.fail(c.at("poles"), c.join("poles"), "poles must be off the real axis");
        }
        cfg.hardy.cases.push_back(hc);
      }
    }
  }

  if (top.has("gamow_pair")) {
    const Block g = top.child("gamow_pair");
    g.allow({"resonance", "alpha_ratios", "r_start", "r_step", "count"});
    if (g.has("resonance")) {
      cfg.gamow.resonance = g.complex_value(g.at("resonance"), g.join("resonance"));
      if (!(cfg.gamow.resonance->imag() < 0.0)) {
        g.fail(g.at("resonance"), g.join("resonance"), "must lie in the lower half-plane");
      }
    }
    cfg.gamow.alpha_ratios = g.numbers("alpha_ratios", cfg.gamow.alpha_ratios);
    for (double r : cfg.gamow.alpha_ratios) {
      if (!(r > 0.0)) g.fail(g.at("alpha_ratios"), g.join("alpha_ratios"), "ratios must be positive");
    }
    if (g.has("r_start")) cfg.gamow.r_start = g.number("r_start", 0.0);
    cfg.gamow.r_step = g.number("r_step", 2.0);
    cfg.gamow.count = g.integer("count", 20);
    if (!(cfg.gamow.r_step > 0.0)) g.fail(g.at("r_step"), g.join("r_step"), "must be positive");
    if (cfg.gamow.count < 3) g.fail(g.at("count"), g.join("count"), "at least 3 limits are needed");
    if (cfg.gamow.r_start && !(*cfg.gamow.r_start > 0.0)) {
      g.fail(g.at("r_start"), g.join("r_start"), "must be positive");
    }
  }

  cfg.evolve.energies = standard_real_axis_energies(units);
  if (top.has("evolve")) {
    const Block e = top.child("evolve");
    e.allow({"kind", "test_function", "energies", "times", "tolerance"});
    cfg.evolve.kind = parse_kind(e, "kind", EigenfunctionKind::sw);
    cfg.evolve.test_function = parse_test_function(e, "test_function", {});
    cfg.evolve.energies = parse_energies(e, "energies", units);
    cfg.evolve.times = e.numbers("times", cfg.evolve.times);
    cfg.evolve.tolerance = e.number("tolerance", 1e-10);
    if (e.has("tolerance")) require_positive(e, "tolerance", cfg.evolve.tolerance);
  }

  if (top.has("reproduce")) {
    const Block r = top.child("reproduce");
    r.allow({"criteria", "tolerance_scale"});
    if (r.has("criteria")) {
      cfg.reproduce.criteria.clear();
      for (double v : r.numbers("criteria", {})) {
        if (v != static_cast<int>(v) || v < 1 || v > 11) {
          r.fail(r.at("criteria"), r.join("criteria"), "criteria are integers from 1 to 11");
        }
        cfg.reproduce.criteria.push_back(static_cast<int>(v));
      }
      std::sort(cfg.reproduce.criteria.begin(), cfg.reproduce.criteria.end());
      cfg.reproduce.criteria.erase(
          std::unique(cfg.reproduce.criteria.begin(), cfg.reproduce.criteria.end()),
          cfg.reproduce.criteria.end());
    }
    cfg.reproduce.tolerance_scale = r.number("tolerance_scale", 1.0);
    if (r.has("tolerance_scale")) require_positive(r, "tolerance_scale", cfg.reproduce.tolerance_scale);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":0:0: <root>: cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

const char* to_string(OutputFormat format) {
  return format == OutputFormat::json ? "json" : "csv";
}

}  // namespace shellres::cli
