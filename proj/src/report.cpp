#include "mvlc/report.hpp"

#include <cmath>

namespace mvlc {

namespace {

// JSON cannot carry NaN/Inf; reports clamp them to null via this filter.
Json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

Json vector_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(finite_or_null(v(i).real()));
    out.push_back(finite_or_null(v(i).imag()));
  }
  return out;
}

Json real_vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(finite_or_null(v(i)));
  return out;
}

Json matrix_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(finite_or_null(m(i, j).real()));
      data.push_back(finite_or_null(m(i, j).imag()));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json verdict_json(const PositivityVerdict& v) {
  Json out;
  out["mode"] = to_string(v.mode);
  out["holds"] = to_string(v.holds);
  out["extreme_value"] = finite_or_null(v.extreme_value);
  out["point"] = real_vector_json(v.point);
  Json witness;
  if (v.witness_stacked.size() > 0) {
    witness["stacked"] = vector_json(v.witness_stacked);
  }
  if (v.witness_u.size() > 0) {
    witness["u"] = vector_json(v.witness_u);
    witness["v"] = vector_json(v.witness_v);
  }
  out["witness"] = std::move(witness);
  return out;
}

Json sweep_json(const SweepSummary& s) {
  Json points = Json::array();
  for (const SweepEntry& e : s.entries) {
    Json p;
    p["point"] = real_vector_json(e.point);
    if (e.verdict) {
      p["verdict"] = verdict_json(*e.verdict);
    } else {
      p["error"] = e.error;
    }
    points.push_back(std::move(p));
  }
  Json summary;
  summary["certified"] = s.certified;
  summary["violations"] = s.violations;
  summary["no_violation"] = s.no_violation;
  summary["errors"] = s.errors;
  if (s.has_verdicts()) {
    summary["worst_extreme"] = finite_or_null(s.worst_extreme);
    summary["worst_point"] = real_vector_json(s.worst_point);
  }
  return Json{{"points", std::move(points)}, {"summary", std::move(summary)}};
}

Json report_envelope(const std::string& command, const Json& spec_info, const Json& parameters) {
  Json out;
  out["schema"] = kReportSchemaId;
  out["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  out["command"] = command;
  out["spec"] = spec_info;
  out["parameters"] = parameters;
  return out;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::string type_name(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::boolean: return "boolean";
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned: return "integer";
    case Json::value_t::number_float: return "number";
    case Json::value_t::string: return "string";
    case Json::value_t::array: return "array";
    case Json::value_t::object: return "object";
    default: return "unknown";
  }
}

bool matches_type(const Json& doc, const std::string& want) {
  if (want == "number") return doc.is_number();
  if (want == "integer") return doc.is_number_integer();
  return type_name(doc) == want;
}

void validate_node(const Json& schema, const Json& doc, const std::string& path,
                   std::vector<std::string>& issues);

bool subtree_valid(const Json& schema, const Json& doc) {
  std::vector<std::string> local;
  validate_node(schema, doc, "", local);
  return local.empty();
}

void validate_node(const Json& schema, const Json& doc, const std::string& path,
                   std::vector<std::string>& issues) {
  if (!schema.is_object()) return;
  std::string at = path.empty() ? "$" : path;

  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_array()) {
      for (const Json& t : *it) ok = ok || matches_type(doc, t.get<std::string>());
    } else {
      ok = matches_type(doc, it->get<std::string>());
    }
    if (!ok) {
      issues.push_back(at + ": expected type " + it->dump() + ", got " + type_name(doc));
      return;
    }
  }

  if (auto it = schema.find("const"); it != schema.end() && doc != *it) {
    issues.push_back(at + ": expected constant " + it->dump());
  }
  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const Json& option : *it) ok = ok || doc == option;
    if (!ok) issues.push_back(at + ": value " + doc.dump() + " not in enum " + it->dump());
  }
  if (auto it = schema.find("minimum"); it != schema.end() && doc.is_number()) {
    if (doc.get<double>() < it->get<double>()) {
      issues.push_back(at + ": value below minimum " + it->dump());
    }
  }

  if (auto it = schema.find("oneOf"); it != schema.end()) {
    int hits = 0;
    for (const Json& option : *it) hits += subtree_valid(option, doc) ? 1 : 0;
    if (hits != 1) {
      issues.push_back(at + ": matched " + std::to_string(hits) + " of oneOf, expected 1");
    }
  }
  if (auto it = schema.find("anyOf"); it != schema.end()) {
    bool ok = false;
    for (const Json& option : *it) ok = ok || subtree_valid(option, doc);
    if (!ok) issues.push_back(at + ": matched no anyOf branch");
  }

  if (doc.is_object()) {
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const Json& key : *req) {
        if (!doc.contains(key.get<std::string>())) {
          issues.push_back(at + ": missing required property '" + key.get<std::string>() + "'");
        }
      }
    }
    const Json* props = nullptr;
    if (auto it = schema.find("properties"); it != schema.end()) props = &*it;
    bool allow_extra = true;
    if (auto it = schema.find("additionalProperties"); it != schema.end() && it->is_boolean()) {
      allow_extra = it->get<bool>();
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props && props->contains(it.key())) {
        validate_node((*props)[it.key()], it.value(), at + "." + it.key(), issues);
      } else if (!allow_extra) {
        issues.push_back(at + ": unexpected property '" + it.key() + "'");
      }
    }
  }

  if (doc.is_array()) {
    if (auto it = schema.find("items"); it != schema.end()) {
      for (size_t i = 0; i < doc.size(); ++i) {
        validate_node(*it, doc[i], at + "[" + std::to_string(i) + "]", issues);
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_schema(const Json& schema, const Json& doc) {
  std::vector<std::string> issues;
  validate_node(schema, doc, "", issues);
  return issues;
}

}  // namespace mvlc
