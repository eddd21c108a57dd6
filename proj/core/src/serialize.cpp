#include "shellres/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace shellres {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

namespace {

Json complex_json(Complex z) { return Json::array({number_json(z.real()), number_json(z.imag())}); }

}  // namespace

Json to_json(const ShellPotential& pot) {
  return Json{{"a", pot.a()},
              {"b", pot.b()},
              {"v0", pot.v0()},
              {"hbar", pot.units().hbar()},
              {"mass", pot.units().mass()}};
}

Json to_json(const Resonance& res) {
  return Json{{"re_k", number_json(res.k_pole.real())},
              {"im_k", number_json(res.k_pole.imag())},
              {"re_E", number_json(res.energy.real())},
              {"im_E", number_json(res.energy.imag())},
              {"which_jost", to_string(res.which)},
              {"residual", number_json(res.residual)},
              {"quadrant", to_string(res.quadrant)}};
}

Json to_json(std::span<const Resonance> list) {
  Json arr = Json::array();
  for (const auto& r : list) arr.push_back(to_json(r));
  return arr;
}

Json to_json(const QuadrantCensus& census) {
  Json counts = Json::object();
  for (Quadrant q : {Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV}) {
    counts[to_string(q)] = census.count(q);
  }
  return Json{{"counts", counts}, {"zeros", to_json(std::span<const Resonance>(census.zeros))}};
}

Json to_json(const TransformSample& sample) {
  Json points = Json::array();
  for (std::size_t i = 0; i < sample.energies.size(); ++i) {
    const Complex v = sample.values[i];
    points.push_back(Json{{"E", number_json(sample.energies[i])},
                          {"re", number_json(v.real())},
                          {"im", number_json(v.imag())},
                          {"abs", number_json(std::abs(v))},
                          {"quad_err", number_json(sample.errors[i])}});
  }
  return Json{{"kind", to_string(sample.kind)},
              {"quadrature_error", number_json(sample.quadrature_error)},
              {"points", points}};
}

Json to_json(const ContinuationValue& value) {
  Json j{{"re_k", number_json(value.k.real())},
         {"im_k", number_json(value.k.imag())},
         {"re", number_json(value.value.real())},
         {"im", number_json(value.value.imag())},
         {"abs", number_json(std::abs(value.value))},
         {"prefactor", complex_json(value.prefactor)},
         {"overlap", complex_json(value.overlap)},
         {"quad_err", number_json(value.quadrature_error)}};
  j["nearest_zero_distance"] =
      value.nearest_zero_distance ? number_json(*value.nearest_zero_distance) : Json(nullptr);
  return j;
}

Json to_json(const ParsevalReport& report) {
  return Json{{"kind", to_string(report.kind)},
              {"deviation", number_json(report.deviation)},
              {"norm_f2", number_json(report.norm_f2)},
              {"norm_uf2", number_json(report.norm_uf2)},
              {"cutoff_momentum", number_json(report.cutoff_momentum)},
              {"cutoff_energy", number_json(report.cutoff_energy)},
              {"tail_estimate", number_json(report.tail_estimate)},
              {"tail_bound", number_json(report.tail_bound)},
              {"quadrature_error", number_json(report.quadrature_error)},
              {"status", to_string(report.status)}};
}

Json to_json(const HardyVerdict& verdict) {
  return Json{{"class", to_string(verdict.cls)},
              {"negative_time_fraction", number_json(verdict.negative_time_fraction)},
              {"positive_time_fraction", number_json(verdict.positive_time_fraction)},
              {"threshold", number_json(verdict.threshold)},
              {"status", to_string(verdict.status)},
              {"edge_magnitude", number_json(verdict.edge_magnitude)},
              {"guard_time", number_json(verdict.guard_time)}};
}

Json to_json(const ArcProbeReport& report) {
  Json radii = Json::array();
  Json mags = Json::array();
  for (double r : report.radii) radii.push_back(number_json(r));
  for (double m : report.magnitudes) mags.push_back(number_json(m));
  return Json{{"kind", to_string(report.kind)},
              {"ray_angle", number_json(report.ray_angle)},
              {"radii", radii},
              {"magnitudes", mags},
              {"growth_ratio", number_json(report.growth_ratio)}};
}

Json to_json(const PairingReport& report) {
  Json partial = Json::array();
  for (std::size_t i = 0; i < report.r_limits.size(); ++i) {
    partial.push_back(Json{{"R", number_json(report.r_limits[i])},
                           {"re", number_json(report.partial[i].real())},
                           {"im", number_json(report.partial[i].imag())}});
  }
  Json j{{"verdict", to_string(report.verdict)},
         {"measured_exponent", number_json(report.measured_exponent)}};
  j["expected_exponent"] =
      report.expected_exponent ? number_json(*report.expected_exponent) : Json(nullptr);
  j["limit"] = report.limit ? complex_json(*report.limit) : Json(nullptr);
  j["partial"] = partial;
  return j;
}

std::string resonances_csv(std::span<const Resonance> list) {
  std::ostringstream out;
  out << "re_k,im_k,re_E,im_E,which_jost,residual,quadrant\n";
  for (const auto& r : list) {
    out << format_double(r.k_pole.real()) << ',' << format_double(r.k_pole.imag()) << ','
        << format_double(r.energy.real()) << ',' << format_double(r.energy.imag()) << ','
        << to_string(r.which) << ',' << format_double(r.residual) << ','
        << to_string(r.quadrant) << '\n';
  }
  return out.str();
}

std::string transform_csv(const TransformSample& sample) {
  std::ostringstream out;
  out << "E,re,im,abs,quad_err\n";
  for (std::size_t i = 0; i < sample.energies.size(); ++i) {
    const Complex v = sample.values[i];
    out << format_double(sample.energies[i]) << ',' << format_double(v.real()) << ','
        << format_double(v.imag()) << ',' << format_double(std::abs(v)) << ','
        << format_double(sample.errors[i]) << '\n';
  }
  return out.str();
}

std::string continuation_csv(std::span<const ContinuationValue> values) {
  std::ostringstream out;
  out << "re_k,im_k,re,im,abs,quad_err,nearest_zero_distance\n";
  for (const auto& v : values) {
    out << format_double(v.k.real()) << ',' << format_double(v.k.imag()) << ','
        << format_double(v.value.real()) << ',' << format_double(v.value.imag()) << ','
        << format_double(std::abs(v.value)) << ',' << format_double(v.quadrature_error) << ','
        << (v.nearest_zero_distance ? format_double(*v.nearest_zero_distance) : "") << '\n';
  }
  return out.str();
}

std::string arc_probe_csv(const ArcProbeReport& report) {
  std::ostringstream out;
  out << "radius,magnitude\n";
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    out << format_double(report.radii[i]) << ',' << format_double(report.magnitudes[i]) << '\n';
  }
  return out.str();
}

}  // namespace shellres
