#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "doctest.h"
#include "mvlc/curvature.hpp"
#include "mvlc/report.hpp"

using namespace mvlc;

namespace {

Json load_shipped_schema() {
  std::filesystem::path here = std::filesystem::path(__FILE__).parent_path();
  std::ifstream in(here.parent_path() / "schemas" / "report.schema.json");
  REQUIRE(in.good());
  return Json::parse(in);
}

PositivityVerdict sample_verdict() {
  PositivityVerdict v;
  v.mode = VerdictMode::NakanoConcave;
  v.holds = VerdictHolds::ViolationFound;
  v.extreme_value = 1.0;
  v.point = RealVector::Zero(2);
  v.witness_stacked = ComplexVector::Ones(4) / 2.0;
  return v;
}

}  // namespace

TEST_CASE("complex data serializes as interleaved re/im pairs") {
  ComplexVector v(2);
  v << Complex(1.0, 2.0), Complex(-3.0, 0.0);
  Json j = vector_json(v);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 4);
  CHECK(j[0] == 1.0);
  CHECK(j[1] == 2.0);
  CHECK(j[2] == -3.0);
  CHECK(j[3] == 0.0);

  RealVector r(3);
  r << 0.5, -1.0, 7.25;
  Json jr = real_vector_json(r);
  CHECK(jr == Json::array({0.5, -1.0, 7.25}));

  ComplexMatrix m(2, 2);
  m << Complex(1, 1), Complex(2, 0), Complex(0, 0), Complex(0, -1);
  Json jm = matrix_json(m);
  CHECK(jm["rows"] == 2);
  CHECK(jm["cols"] == 2);
  // row-major interleaved
  CHECK(jm["data"] == Json::array({1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, -1.0}));
}

TEST_CASE("non-finite numbers become null") {
  double nan = std::numeric_limits<double>::quiet_NaN();
  double inf = std::numeric_limits<double>::infinity();

  RealVector r(3);
  r << 1.0, nan, inf;
  Json jr = real_vector_json(r);
  CHECK(jr[0] == 1.0);
  CHECK(jr[1].is_null());
  CHECK(jr[2].is_null());

  ComplexVector v(1);
  v << Complex(nan, 2.0);
  Json jv = vector_json(v);
  CHECK(jv[0].is_null());
  CHECK(jv[1] == 2.0);

  PositivityVerdict pv = sample_verdict();
  pv.extreme_value = nan;
  CHECK(verdict_json(pv)["extreme_value"].is_null());
}

TEST_CASE("rendering is byte-stable with sorted keys") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  j["mid"] = Json{{"b", true}, {"a", Json::array({1, 2})}};

  std::string out = render_json(j);
  CHECK(out == "{\n  \"alpha\": 2,\n  \"mid\": {\n    \"a\": [\n      1,\n      2\n    ],\n    \"b\": true\n  },\n  \"zeta\": 1\n}\n");
  CHECK(render_json(j) == out);
  CHECK(out.back() == '\n');
}

TEST_CASE("verdicts carry the right witness family") {
  PositivityVerdict nak = sample_verdict();
  Json jn = verdict_json(nak);
  CHECK(jn["mode"] == "NakanoConcave");
  CHECK(jn["holds"] == "ViolationFound");
  CHECK(jn["extreme_value"] == 1.0);
  CHECK(jn["point"] == Json::array({0.0, 0.0}));
  CHECK(jn["witness"].contains("stacked"));
  CHECK_FALSE(jn["witness"].contains("u"));
  CHECK(jn["witness"]["stacked"].size() == 8);

  PositivityVerdict gr;
  gr.mode = VerdictMode::GriffithsConvex;
  gr.holds = VerdictHolds::NoViolationFound;
  gr.extreme_value = -0.25;
  gr.point = RealVector::Ones(1);
  gr.witness_u = ComplexVector::Ones(2);
  gr.witness_v = ComplexVector::Ones(1);
  Json jg = verdict_json(gr);
  CHECK(jg["mode"] == "GriffithsConvex");
  CHECK(jg["witness"].contains("u"));
  CHECK(jg["witness"].contains("v"));
  CHECK_FALSE(jg["witness"].contains("stacked"));
}

TEST_CASE("sweeps serialize every entry and the tally") {
  SweepSummary s;
  SweepEntry ok;
  ok.point = RealVector::Zero(1);
  ok.verdict = sample_verdict();
  SweepEntry bad;
  bad.point = RealVector::Ones(1);
  bad.error = "metric exploded";
  s.entries = {ok, bad};
  s.certified = 0;
  s.violations = 1;
  s.errors = 1;
  s.worst_extreme = 1.0;
  s.worst_point = RealVector::Zero(1);

  Json j = sweep_json(s);
  REQUIRE(j["points"].size() == 2);
  CHECK(j["points"][0].contains("verdict"));
  CHECK_FALSE(j["points"][0].contains("error"));
  CHECK(j["points"][1]["error"] == "metric exploded");
  CHECK_FALSE(j["points"][1].contains("verdict"));
  CHECK(j["summary"]["violations"] == 1);
  CHECK(j["summary"]["errors"] == 1);
  CHECK(j["summary"]["worst_extreme"] == 1.0);
  CHECK(j["summary"]["worst_point"] == Json::array({0.0}));

  SUBCASE("error-only sweeps omit the extreme") {
    SweepSummary only;
    only.entries = {bad};
    only.errors = 1;
    Json jo = sweep_json(only);
    CHECK_FALSE(jo["summary"].contains("worst_extreme"));
    CHECK_FALSE(jo["summary"].contains("worst_point"));
  }
}

TEST_CASE("the envelope pins schema, tool, and command") {
  Json spec_info{{"name", "gauss-scalar"}, {"source", "builtin"}, {"hash", "0123abcd"}};
  Json params{{"tol", 1e-9}};
  Json env = report_envelope("check", spec_info, params);
  CHECK(env["schema"] == "mvlc-report/1");
  CHECK(env["tool"]["name"] == "mvlc");
  CHECK(env["tool"]["version"].is_string());
  CHECK(env["command"] == "check");
  CHECK(env["spec"] == spec_info);
  CHECK(env["parameters"] == params);
}

TEST_CASE("the validator reports typed mismatches with paths") {
  auto one_issue = [](const Json& schema, const Json& doc) {
    std::vector<std::string> issues = validate_schema(schema, doc);
    REQUIRE(issues.size() == 1);
    return issues[0];
  };

  SUBCASE("type") {
    CHECK(one_issue(Json{{"type", "object"}}, Json("s")) ==
          "$: expected type \"object\", got string");
    CHECK(validate_schema(Json{{"type", Json::array({"number", "null"})}}, Json(nullptr)).empty());
    CHECK(one_issue(Json{{"type", Json::array({"number", "null"})}}, Json("s")) ==
          "$: expected type [\"number\",\"null\"], got string");
    // integers are numbers but not vice versa
    CHECK(validate_schema(Json{{"type", "number"}}, Json(3)).empty());
    CHECK(one_issue(Json{{"type", "integer"}}, Json(1.5)) ==
          "$: expected type \"integer\", got number");
  }

  SUBCASE("const and enum") {
    Json schema{{"properties", Json{{"schema", Json{{"const", "mvlc-report/1"}}},
                                    {"mode", Json{{"enum", Json::array({"a", "b"})}}}}}};
    Json doc{{"schema", "mvlc-report/2"}, {"mode", "c"}};
    std::vector<std::string> issues = validate_schema(schema, doc);
    REQUIRE(issues.size() == 2);
    CHECK(issues[0] == "$.mode: value \"c\" not in enum [\"a\",\"b\"]");
    CHECK(issues[1] == "$.schema: expected constant \"mvlc-report/1\"");
  }

  SUBCASE("minimum") {
    Json schema{{"properties", Json{{"exit_code", Json{{"type", "integer"}, {"minimum", 0}}}}}};
    CHECK(one_issue(schema, Json{{"exit_code", -1}}) == "$.exit_code: value below minimum 0");
    CHECK(validate_schema(schema, Json{{"exit_code", 3}}).empty());
  }

  SUBCASE("required and additionalProperties") {
    Json schema{{"type", "object"},
                {"required", Json::array({"tool"})},
                {"properties", Json{{"tool", Json{{"type", "string"}}}}},
                {"additionalProperties", false}};
    CHECK(one_issue(schema, Json::object()) == "$: missing required property 'tool'");
    CHECK(one_issue(schema, Json{{"tool", "x"}, {"extra", 1}}) ==
          "$: unexpected property 'extra'");
  }

  SUBCASE("items index into the path") {
    Json schema{{"properties",
                 Json{{"xs", Json{{"type", "array"}, {"items", Json{{"type", "number"}}}}}}}};
    CHECK(one_issue(schema, Json{{"xs", Json::array({1.0, "s"})}}) ==
          "$.xs[1]: expected type \"number\", got string");
  }

  SUBCASE("oneOf wants exactly one branch") {
    Json branches = Json::array({Json{{"required", Json::array({"a"})}},
                                 Json{{"required", Json::array({"b"})}}});
    Json schema{{"oneOf", branches}};
    CHECK(one_issue(schema, Json::object()) == "$: matched 0 of oneOf, expected 1");
    CHECK(one_issue(schema, Json{{"a", 1}, {"b", 2}}) == "$: matched 2 of oneOf, expected 1");
    CHECK(validate_schema(schema, Json{{"a", 1}}).empty());
  }

  SUBCASE("anyOf wants at least one branch") {
    Json schema{{"anyOf", Json::array({Json{{"type", "string"}}, Json{{"type", "null"}}})}};
    CHECK(validate_schema(schema, Json(nullptr)).empty());
    CHECK(one_issue(schema, Json(2)) == "$: matched no anyOf branch");
  }
}

TEST_CASE("the shipped schema accepts a full report and rejects corruption") {
  Json schema = load_shipped_schema();

  Json report = report_envelope(
      "check", Json{{"name", "gauss-scalar"}, {"source", "builtin"}, {"hash", "abc"}},
      Json{{"tol", 1e-9}});
  report["exit_code"] = 0;

  SweepSummary s;
  SweepEntry ok;
  ok.point = RealVector::Zero(2);
  ok.verdict = sample_verdict();
  s.entries = {ok};
  s.violations = 1;
  s.worst_extreme = 1.0;
  s.worst_point = RealVector::Zero(2);
  report["sweeps"] = Json::array({Json{{"mode", "NakanoConcave"}, {"result", sweep_json(s)}}});

  CHECK(validate_schema(schema, report).empty());

  SUBCASE("unknown command") {
    report["command"] = "frobnicate";
    std::vector<std::string> issues = validate_schema(schema, report);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("$.command") == 0);
  }
  SUBCASE("missing exit code") {
    report.erase("exit_code");
    std::vector<std::string> issues = validate_schema(schema, report);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0] == "$: missing required property 'exit_code'");
  }
  SUBCASE("sweep entry that is neither verdict nor error") {
    report["sweeps"][0]["result"]["points"].push_back(Json{{"point", Json::array({0.0, 0.0})}});
    std::vector<std::string> issues = validate_schema(schema, report);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("matched 0 of oneOf") != std::string::npos);
  }
}
