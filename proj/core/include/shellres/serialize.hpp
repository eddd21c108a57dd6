#pragma once

// JSON and CSV projections of library results. JSON is the canonical form;
// every CSV writer emits a header row followed by one row per record.

#include <span>
#include <string>

#include <json.hpp>

#include "shellres/hardy.hpp"
#include "shellres/model.hpp"
#include "shellres/resonances.hpp"
#include "shellres/spectral.hpp"

namespace shellres {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers, non-finite ones as the strings "inf", "-inf", "nan".
Json number_json(double x);

Json to_json(const ShellPotential& pot);
Json to_json(const Resonance& res);
Json to_json(std::span<const Resonance> list);
Json to_json(const QuadrantCensus& census);
Json to_json(const TransformSample& sample);
Json to_json(const ContinuationValue& value);
Json to_json(const ParsevalReport& report);
Json to_json(const HardyVerdict& verdict);
Json to_json(const ArcProbeReport& report);
Json to_json(const PairingReport& report);

/// re_k, im_k, re_E, im_E, which_jost, residual, quadrant
std::string resonances_csv(std::span<const Resonance> list);
/// E, re, im, abs, quad_err
std::string transform_csv(const TransformSample& sample);
/// re_k, im_k, re, im, abs, quad_err, nearest_zero_distance
std::string continuation_csv(std::span<const ContinuationValue> values);
/// radius, magnitude
std::string arc_probe_csv(const ArcProbeReport& report);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace shellres
