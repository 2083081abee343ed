#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mvlc/curvature.hpp"
#include "mvlc/linalg.hpp"

namespace mvlc {

inline constexpr const char* kToolName = "mvlc";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchemaId = "mvlc-report/1";

using Json = nlohmann::json;

// Complex data serialized as interleaved [re, im, re, im, ...].
Json vector_json(const ComplexVector& v);
Json real_vector_json(const RealVector& v);
Json matrix_json(const ComplexMatrix& m);  // {"rows", "cols", "data" interleaved row-major}

Json verdict_json(const PositivityVerdict& v);
Json sweep_json(const SweepSummary& s);

// Report envelope with the fixed fields every command shares.
Json report_envelope(const std::string& command, const Json& spec_info, const Json& parameters);

// Stable serialization used for all JSON output (sorted keys, two-space
// indent, trailing newline).
std::string render_json(const Json& j);

// Minimal JSON-Schema validator covering the subset used by the shipped
// schema: type, properties, required, items, enum, const, minimum,
// additionalProperties (bool), oneOf, anyOf. Returns human-readable
// "path: message" strings; empty means valid.
std::vector<std::string> validate_schema(const Json& schema, const Json& doc);

}  // namespace mvlc
