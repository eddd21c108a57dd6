#include "shellres_cli/battery.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <sstream>

#include <shellres/error.hpp>
#include <shellres/hardy.hpp>
#include <shellres/regular_solution.hpp>

namespace shellres::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, n) on up to `jobs` threads, results in index order.
template <typename T, typename F>
std::vector<T> parallel_map(int n, int jobs, F body) {
  std::vector<T> out(n);
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) out[i] = body(i);
    return out;
  }
  for (int start = 0; start < n; start += jobs) {
    std::vector<std::future<T>> wave;
    for (int i = start; i < std::min(n, start + jobs); ++i) {
      wave.push_back(std::async(std::launch::async, body, i));
    }
    for (std::size_t j = 0; j < wave.size(); ++j) out[start + j] = wave[j].get();
  }
  return out;
}

ShellPotential free_version(const ShellPotential& pot) {
  return ShellPotential(pot.a(), pot.b(), 0.0, pot.units());
}

// 10 x 10 cell-centred grid on [-5, 5] x [-2, 2]; never hits k = 0.
std::vector<Complex> complex_grid() {
  std::vector<Complex> out;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      out.emplace_back(-5.0 + (i + 0.5), -2.0 + 0.4 * (j + 0.5));
    }
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

CriterionRow make_row(int id, double measured, double threshold, const char* relation) {
  CriterionRow row;
  row.id = id;
  row.name = criterion_name(id);
  row.measured = measured;
  row.threshold = threshold;
  row.relation = relation;
  bool ok = false;
  if (std::string(relation) == "<") ok = measured < threshold;
  if (std::string(relation) == ">") ok = measured > threshold;
  if (std::string(relation) == ">=") ok = measured >= threshold;
  row.status = ok ? RowStatus::pass : RowStatus::fail;
  return row;
}

class Battery {
 public:
  Battery(const ShellPotential& pot, const BatteryOptions& opts) : pot_(pot), opts_(opts) {}

  CriterionRow run(int id) {
    switch (id) {
      case 1: return free_particle_identity();
      case 2: return ode_consistency();
      case 3: return jost_symmetries();
      case 4: return quadrant_census_oracle();
      case 5: return parseval_battery();
      case 6: return closed_form_transform();
      case 7: return non_hardy_blow_up();
      case 8: return arc_growth();
      case 9: return gamow_dichotomy();
      case 10: return hardy_sanity();
      default: throw InvalidArgument("unknown criterion " + std::to_string(id));
    }
  }

 private:
  const QuadrantCensus& census() {
    if (!census_) census_ = quadrant_census(CensusBox{}, pot_, {}, opts_.jobs);
    return *census_;
  }

  CriterionRow free_particle_identity() {
    const ShellPotential free = free_version(pot_);
    double worst = 0.0;
    for (Complex k : complex_grid()) {
      const JostPair j = jost(ComplexMomentum(k), free);
      worst = std::max({worst, std::abs(j.plus - 1.0), std::abs(j.minus - 1.0)});
    }
    auto row = make_row(1, worst, 1e-12 * opts_.tolerance_scale, "<");
    row.detail = "max |J(k) - 1| over 100 complex momenta, v0 = 0";
    return row;
  }

  CriterionRow ode_consistency() {
    const std::vector<Complex> momenta = {
        {0.3, 0.0}, {0.7, 0.0},  {1.1, 0.0},  {1.6, 0.0},  {2.1, 0.0},  {2.6, 0.0},  {3.1, 0.0},
        {3.7, 0.0}, {4.4, 0.0},  {5.2, 0.0},  {6.0, 0.0},  {1.0, -0.3}, {2.5, -0.5}, {4.0, -1.0},
        {5.5, -0.2}, {1.5, 0.4}, {3.0, 0.8},  {4.5, 0.3},  {2.3191, -0.0093}, {0.5, -1.5}};
    const double a = pot_.a();
    const double b = pot_.b();
    const std::vector<double> radii = {0.3 * a, 0.75 * a, 0.95 * a, a + 0.2 * (b - a),
                                       a + 0.5 * (b - a), a + 0.8 * (b - a), b + 0.4,
                                       b + 1.1, b + 2.5, b + 4.0};
    double worst = 0.0;
    for (Complex k : momenta) {
      const MatchingCoefficients c = solve_matching(ComplexMomentum(k), pot_);
      const double e = std::abs(momentum_to_energy(c.k, pot_.units()));
      for (double r : radii) {
        const double res = schrodinger_residual(r, c.k, pot_);
        worst = std::max(worst, res / ((1.0 + e) * std::abs(eval_chi(r, c))));
      }
    }
    auto row = make_row(2, worst, 1e-6 * opts_.tolerance_scale, "<");
    row.detail = "max residual / ((1 + |E|) |chi|) over 200 (r, k) samples";
    return row;
  }

  CriterionRow jost_symmetries() {
    double sym = 0.0;
    for (Complex k : complex_grid()) {
      const JostPair at_k = jost(ComplexMomentum(k), pot_);
      const JostPair at_conj = jost(ComplexMomentum(std::conj(k)), pot_);
      const JostPair at_neg = jost(ComplexMomentum(-k), pot_);
      const double scale = std::max({1.0, std::abs(at_k.plus), std::abs(at_k.minus)});
      sym = std::max(sym, std::abs(at_k.minus - std::conj(at_conj.plus)) / scale);
      sym = std::max(sym, std::abs(at_neg.plus - at_k.minus) / scale);
    }
    double pair = 0.0;
    for (const Resonance& z : census().zeros) {
      const Complex mirrored = -std::conj(z.k_pole.value);
      pair = std::max(pair, std::abs(jost_value(z.which, ComplexMomentum(mirrored), pot_)));
    }
    const double sym_tol = 1e-12 * opts_.tolerance_scale;
    const double pair_tol = 1e-8 * opts_.tolerance_scale;
    auto row = make_row(3, sym, sym_tol, "<");
    if (!(pair < pair_tol) || census().zeros.empty()) row.status = RowStatus::fail;
    row.detail = "relative symmetry defect; mirrored-zero residual " + fmt(pair) + " (limit " +
                 fmt(pair_tol) + ") over " + std::to_string(census().zeros.size()) + " zeros";
    return row;
  }

  CriterionRow quadrant_census_oracle() {
    const CensusBox box;
    const auto regions = quadrant_regions(box);
    const auto oracle = parallel_map<int>(4, opts_.jobs, [&](int q) {
      return grid_minima_count(regions[q], pot_, 400);
    });
    int matched = 0;
    std::string detail = "census/oracle per quadrant:";
    for (int q = 0; q < 4; ++q) {
      const int c = census().counts[q];
      if (c >= 1 && c == oracle[q]) ++matched;
      detail += std::string(" ") + to_string(static_cast<Quadrant>(q)) + "=" +
                std::to_string(c) + "/" + std::to_string(oracle[q]);
    }
    auto row = make_row(4, matched, 4, ">=");
    row.detail = detail;
    return row;
  }

  CriterionRow parseval_battery() {
    const std::vector<TestFunction> fs = {TestFunction::exp_decay(1.0), TestFunction::gaussian(1.0),
                                          TestFunction::smooth_bump(3.0)};
    const EigenfunctionKind kinds[] = {EigenfunctionKind::sw, EigenfunctionKind::plus,
                                       EigenfunctionKind::minus};
    ParsevalOptions popts;
    popts.tolerance = 1e-6 * opts_.tolerance_scale;
    const auto reports = parallel_map<ParsevalReport>(9, opts_.jobs, [&](int i) {
      return parseval_check(kinds[i % 3], fs[i / 3], pot_, popts);
    });
    double worst = 0.0;
    bool inconclusive = false;
    for (const auto& r : reports) {
      worst = std::max(worst, r.deviation);
      inconclusive = inconclusive || r.status == CheckStatus::inconclusive;
    }
    auto row = make_row(5, worst, popts.tolerance, "<");
    if (inconclusive) row.status = RowStatus::inconclusive;
    row.detail = "max Parseval deviation over 3 kinds x {e^-r, gaussian(1), bump(3)}";
    return row;
  }

  CriterionRow closed_form_transform() {
    const ShellPotential free = free_version(pot_);
    const auto energies = standard_real_axis_energies(pot_.units());
    const auto sample =
        transform(EigenfunctionKind::plus, TestFunction::exp_decay(1.0), energies, free, 1e-13);
    const double c0 = pot_.units().c0();
    double worst = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
      const double k = std::sqrt(c0 * energies[i]);
      const double exact = std::sqrt(c0 / (kPi * k)) * k / (1.0 + k * k);
      worst = std::max(worst, std::abs(sample.values[i] - exact));
    }
    auto row = make_row(6, worst, 1e-8 * opts_.tolerance_scale, "<");
    row.detail = "max |U+ e^-r - sqrt(c0/(pi k)) k/(1+k^2)| over 50 energies, v0 = 0";
    return row;
  }

  CriterionRow non_hardy_blow_up() {
    const TestFunction bump = TestFunction::smooth_bump(3.0);
    const auto energies = standard_real_axis_energies(pot_.units());
    const auto real_axis = transform(EigenfunctionKind::sw, bump, energies, pot_, 1e-12);
    std::vector<double> mags;
    for (Complex v : real_axis.values) mags.push_back(std::abs(v));
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    double median = mags[mags.size() / 2];
    if (mags.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(mags.begin(), mags.begin() + mags.size() / 2));
    }

    const double distances[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    double best[2] = {0.0, 0.0};
    const auto& zeros = census().zeros;
    for (const Resonance& z : zeros) {
      const Complex k0 = z.k_pole.value;
      double prev = 0.0;
      bool monotone = true;
      double last = 0.0;
      for (double d : distances) {
        // Horizontal approach: the ray never meets either axis.
        const Complex k = k0 + Complex(k0.real() > 0.0 ? d : -d, 0.0);
        const double m = std::abs(continue_transform_sw(bump, ComplexMomentum(k), pot_).value);
        monotone = monotone && m > prev;
        prev = m;
        last = m;
      }
      if (!monotone) continue;
      double& slot = best[z.which == JostBranch::plus ? 0 : 1];
      slot = std::max(slot, last / median);
    }
    auto row = make_row(7, std::min(best[0], best[1]), 1e4, ">");
    row.detail = "|U_sw bump| at distance 1e-3 / real-axis median; best J+ zero " + fmt(best[0]) +
                 ", best J- zero " + fmt(best[1]);
    return row;
  }

  CriterionRow arc_growth() {
    const TestFunction bump = TestFunction::smooth_bump(3.0);
    const std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
    struct Probe {
      EigenfunctionKind kind;
      double angle;
    };
    const std::vector<Probe> probes = {{EigenfunctionKind::sw, kPi / 4},
                                       {EigenfunctionKind::sw, -kPi / 4},
                                       {EigenfunctionKind::plus, kPi / 4},
                                       {EigenfunctionKind::plus, -kPi / 4}};
    const auto ratios = parallel_map<double>(4, opts_.jobs, [&](int i) {
      return arc_growth_probe(probes[i].kind, bump, probes[i].angle, radii, pot_).growth_ratio;
    });
    std::string detail = "growth ratio R=2 -> 16:";
    for (std::size_t i = 0; i < probes.size(); ++i) {
      detail += std::string(" ") + to_string(probes[i].kind) +
                (probes[i].angle > 0 ? "@+pi/4=" : "@-pi/4=") + fmt(ratios[i]);
    }
    auto row = make_row(8, *std::min_element(ratios.begin(), ratios.end()), 1e3, ">");
    row.detail = detail;
    return row;
  }

  CriterionRow gamow_dichotomy() {
    const Resonance* broad = nullptr;
    for (const Resonance& z : census().zeros) {
      if (z.which == JostBranch::plus && z.quadrant == Quadrant::IV &&
          (!broad || z.k_pole.imag() < broad->k_pole.imag())) {
        broad = &z;
      }
    }
    if (!broad) {
      auto row = make_row(9, kNaN, 0.1, "<");
      row.detail = "no J+ zero in quadrant IV";
      return row;
    }
    const GamowState state = GamowState::from_resonance(*broad, pot_);
    const auto limits = uniform_limits(pot_.b() + 2.0, 2.0, 20);
    double worst = 0.0;
    bool verdicts_ok = true;
    std::string detail = "k0 = " + fmt(broad->k_pole.real()) + fmt(broad->k_pole.imag()) + "i;";
    for (double ratio : {0.5, 0.9, 1.1, 2.0}) {
      const auto rep =
          gamow_pair(TestFunction::exp_decay(ratio * state.growth_rate()), state, limits);
      const bool expect_converged = ratio > 1.0;
      verdicts_ok = verdicts_ok && ((rep.verdict == PairingVerdict::converged) == expect_converged);
      if (rep.verdict == PairingVerdict::diverged) {
        const double expected = *rep.expected_exponent;
        worst = std::max(worst, std::abs(rep.measured_exponent - expected) / std::abs(expected));
      }
      detail += " " + fmt(ratio) + ":" + to_string(rep.verdict);
    }
    auto row = make_row(9, worst, 0.1, "<");
    if (!verdicts_ok) row.status = RowStatus::fail;
    row.detail = detail;
    return row;
  }

  CriterionRow hardy_sanity() {
    const double e_max = 50.0;
    const auto grid = hardy_grid(e_max, 4096);
    const HardyClass expected[] = {HardyClass::upper, HardyClass::lower, HardyClass::neither};
    const auto cases = default_hardy_cases();
    int correct = 0;
    bool inconclusive = false;
    std::string detail;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::vector<Complex> g;
      for (double e : grid) {
        Complex v = 1.0;
        for (Complex p : cases[i].poles) v /= (e - p);
        g.push_back(v);
      }
      const HardyVerdict verdict = classify_hardy(g, e_max, 1e-3);
      if (verdict.status == CheckStatus::inconclusive) inconclusive = true;
      if (verdict.cls == expected[i]) ++correct;
      detail += (detail.empty() ? "" : " ") + cases[i].name + "=" + to_string(verdict.cls);
    }
    auto row = make_row(10, correct, 3, ">=");
    if (inconclusive) row.status = RowStatus::inconclusive;
    row.detail = detail;
    return row;
  }

  ShellPotential pot_;
  BatteryOptions opts_;
  std::optional<QuadrantCensus> census_;
};

}  // namespace

const char* criterion_name(int id) {
  static const char* const names[] = {"",
                                      "free-particle identity",
                                      "ODE consistency",
                                      "Jost symmetries",
                                      "quadrant census",
                                      "Parseval",
                                      "closed-form transform",
                                      "non-Hardy blow-up",
                                      "arc growth",
                                      "Gamow pairing dichotomy",
                                      "Hardy classifier sanity",
                                      "determinism"};
  return id >= 1 && id <= kCriterionCount ? names[id] : "unknown";
}

int grid_minima_count(const SearchRegion& region, const ShellPotential& pot, int n) {
  std::vector<double> mag(static_cast<std::size_t>(n) * n);
  const double dx = (region.re_max - region.re_min) / (n - 1);
  const double dy = (region.im_max - region.im_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMomentum k(region.re_min + i * dx, region.im_min + j * dy);
      const JostPair jp = jost(k, pot);
      mag[static_cast<std::size_t>(i) * n + j] = std::abs(jp.plus * jp.minus);
    }
  }
  int count = 0;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = 1; j + 1 < n; ++j) {
      const double centre = mag[static_cast<std::size_t>(i) * n + j];
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && !(centre < mag[static_cast<std::size_t>(i + di) * n + j + dj])) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) ++count;
    }
  }
  return count;
}

std::vector<CriterionRow> run_battery(const ShellPotential& pot, const std::vector<int>& ids,
                                      const BatteryOptions& opts) {
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  auto run_once = [&](bool include_determinism) {
    Battery battery(pot, opts);
    std::vector<CriterionRow> rows;
    for (int id : sorted) {
      if (id == 11) {
        if (!include_determinism) continue;
        CriterionRow row;
        row.id = 11;
        row.name = criterion_name(11);
        rows.push_back(row);
        continue;
      }
      try {
        rows.push_back(battery.run(id));
      } catch (const QuadratureError& e) {
        CriterionRow row = make_row(id, kNaN, kNaN, "<");
        row.status = RowStatus::inconclusive;
        row.detail = e.what();
        rows.push_back(row);
      }
    }
    return rows;
  };

  std::vector<CriterionRow> rows = run_once(true);
  auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.id == 11; });
  if (it != rows.end()) {
    auto dump = [](const std::vector<CriterionRow>& rs) {
      Json arr = Json::array();
      for (const auto& r : rs) {
        if (r.id != 11) arr.push_back(to_json(r));
      }
      return arr.dump();
    };
    const std::string first = dump(rows);
    const std::string second = dump(run_once(false));
    *it = make_row(11, first == second ? 1.0 : 0.0, 1.0, ">=");
    it->detail = "second in-process run of the other selected criteria, serialized rows compared";
  }
  return rows;
}

Json to_json(const CriterionRow& row) {
  return Json{{"criterion", row.id},
              {"name", row.name},
              {"status", to_string(row.status)},
              {"measured", number_json(row.measured)},
              {"relation", row.relation},
              {"threshold", number_json(row.threshold)},
              {"detail", row.detail}};
}

std::string battery_csv(const std::vector<CriterionRow>& rows) {
  std::ostringstream out;
  out << "criterion,name,status,measured,relation,threshold,detail\n";
  for (const auto& r : rows) {
    out << r.id << ',' << r.name << ',' << to_string(r.status) << ',' << format_double(r.measured)
        << ',' << r.relation << ',' << format_double(r.threshold) << ",\"" << r.detail << "\"\n";
  }
  return out.str();
}

const char* to_string(RowStatus status) {
  switch (status) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace shellres::cli
