#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using Json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the CLI with stderr discarded; stdout and the exit code drive the
// schema and determinism checks.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      (env.empty() ? "" : env + " ") + PF_CLI_PATH + " " + args +
      " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Json load_schema(const std::string& name) {
  const std::string path = std::string(PF_SCHEMA_DIR) + "/" + name;
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Json::parse(ss.str());
}

// Validator for the self-contained subset the schemas use: type (single or
// list), const, enum, pattern, required, properties, additionalProperties,
// items, minItems, maxItems, oneOf.
void validate(const Json& schema, const Json& value, const std::string& path,
              std::vector<std::string>& errors) {
  const auto fail = [&](const std::string& why) {
    errors.push_back(path + ": " + why);
  };

  if (schema.contains("const")) {
    if (value != schema["const"]) fail("const mismatch");
    return;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const Json& v : schema["enum"]) hit = hit || value == v;
    if (!hit) fail("not in enum");
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const Json& sub : schema["oneOf"]) {
      std::vector<std::string> sub_errors;
      validate(sub, value, path, sub_errors);
      if (sub_errors.empty()) ++hits;
    }
    if (hits != 1)
      fail("oneOf matched " + std::to_string(hits) + " branches");
  }
  if (schema.contains("type")) {
    const auto matches = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "boolean") return value.is_boolean();
      if (t == "null") return value.is_null();
      if (t == "number") return value.is_number();
      if (t == "integer")
        return value.is_number_integer() ||
               (value.is_number_float() &&
                value.get<double>() == static_cast<long long>(value.get<double>()));
      return false;
    };
    bool ok = false;
    if (schema["type"].is_array()) {
      for (const Json& t : schema["type"]) ok = ok || matches(t.get<std::string>());
    } else {
      ok = matches(schema["type"].get<std::string>());
    }
    if (!ok) {
      fail("type mismatch");
      return;
    }
  }
  if (value.is_string() && schema.contains("pattern")) {
    const std::regex re(schema["pattern"].get<std::string>());
    if (!std::regex_search(value.get<std::string>(), re)) fail("pattern mismatch");
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const Json& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          fail("missing required '" + key.get<std::string>() + "'");
    const bool closed = schema.contains("additionalProperties") &&
                        schema["additionalProperties"].is_boolean() &&
                        !schema["additionalProperties"].get<bool>();
    for (const auto& [key, sub] : value.items()) {
      if (schema.contains("properties") && schema["properties"].contains(key))
        validate(schema["properties"][key], sub, path + "/" + key, errors);
      else if (closed)
        fail("unexpected property '" + key + "'");
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<std::size_t>())
      fail("too few items");
    if (schema.contains("maxItems") &&
        value.size() > schema["maxItems"].get<std::size_t>())
      fail("too many items");
    if (schema.contains("items")) {
      std::size_t i = 0;
      for (const Json& item : value)
        validate(schema["items"], item, path + "/" + std::to_string(i++), errors);
    }
  }
}

// Success outputs must satisfy both the generic envelope and the
// command-specific schema.
Json expect_report(const std::string& args, const std::string& schema_name,
                   int expected_exit = 0) {
  const RunResult r = run_cli(args);
  CHECK_MESSAGE(r.exit_code == expected_exit, args << " -> " << r.out);
  const Json doc = Json::parse(r.out);
  for (const std::string& name : {std::string("run_report.schema.json"), schema_name}) {
    std::vector<std::string> errors;
    validate(load_schema(name), doc, "", errors);
    for (const std::string& e : errors) MESSAGE(name << " " << e);
    CHECK_MESSAGE(errors.empty(), args);
  }
  return doc;
}

Json expect_error(const std::string& args, const std::string& kind,
                  int expected_exit = 1) {
  const RunResult r = run_cli(args);
  CHECK_MESSAGE(r.exit_code == expected_exit, args << " -> " << r.out);
  const Json doc = Json::parse(r.out);
  std::vector<std::string> errors;
  validate(load_schema("error_report.schema.json"), doc, "", errors);
  CHECK_MESSAGE(errors.empty(), args);
  CHECK(doc["error"]["kind"] == kind);
  return doc;
}

const std::string kPickData =
    "'{\"space\":{\"family\":\"hardy\"},\"points\":[[0,0],[0.5,0]],"
    "\"targets\":[[0,0],[0.5,0]]}'";

}  // namespace

TEST_CASE("factor run matches its schema") {
  const Json doc =
      expect_report("factor --space dirichlet --poly \"z-1\"", "factor.schema.json");
  CHECK(doc["command"] == "factor");
  // z - 1 is not outer: the gain is sqrt(2) - 1.
  CHECK(doc["outputs"]["gain"].get<double>() ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));
  CHECK(doc["residuals"]["converged"] == true);
}

TEST_CASE("common-factor run matches its schema") {
  expect_report("common-factor --space dirichlet --poly \"1\" --poly \"z\"",
                "common_factor.schema.json");
}

TEST_CASE("weak-product run matches its schema") {
  expect_report("weak-product --space hardy --poly \"1\" --poly \"z\"",
                "weak_product.schema.json");
}

TEST_CASE("through-factor run matches its schema") {
  expect_report(
      "through-factor --space d_alpha --alpha -1 --target-space hardy "
      "--poly \"z\"",
      "through_factor.schema.json");
}

TEST_CASE("sarason run matches its schema") {
  const Json doc = expect_report("sarason --space dirichlet --poly \"z-1\"",
                                 "sarason.schema.json");
  CHECK(doc["outputs"]["series"][0]["re"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("moments run matches its schema") {
  const Json doc = expect_report(
      "moments --space dirichlet --poly \"z-1\" --order 2", "moments.schema.json");
  CHECK(doc["outputs"]["profile"]["norm_sq"].get<double>() ==
        doctest::Approx(3.0));
}

TEST_CASE("pick classify run matches its schema") {
  const Json doc = expect_report("pick classify --data " + kPickData,
                                 "pick_classify.schema.json");
  CHECK(doc["outputs"]["class"] == "extremal");
}

TEST_CASE("pick solve run matches its schema") {
  expect_report("pick solve --data " + kPickData, "pick_solve.schema.json");
}

TEST_CASE("pick approx run matches its schema") {
  expect_report(
      "pick approx --data '{\"space\":{\"family\":\"hardy\"},"
      "\"phi\":\"0.5 + 0.5*z\",\"schedule\":[[[0,0]],[[0,0],[0.3,0]]]}'",
      "pick_approx.schema.json");
}

TEST_CASE("fock outer-defect run matches its schema") {
  const Json doc = expect_report(
      "fock outer-defect --data '{\"dim\":1,\"terms\":[{\"word\":[],\"re\":1,"
      "\"im\":0},{\"word\":[1],\"re\":-0.5,\"im\":0}]}' --N 4",
      "fock_outer_defect.schema.json");
  // Geometric series in closed form: defect^2 = t^(2N+2) / sum t^(2k).
  const double t2 = 0.25;
  double denom = 0.0;
  for (int k = 0; k <= 5; ++k) denom += std::pow(t2, k);
  CHECK(doc["outputs"]["defect"].get<double>() ==
        doctest::Approx(std::sqrt(std::pow(t2, 5) / denom)).epsilon(1e-9));
}

TEST_CASE("fock sarason run matches its schema") {
  expect_report(
      "fock sarason --data '{\"dim\":2,\"terms\":[{\"word\":[1],\"re\":1,"
      "\"im\":0},{\"word\":[1,2],\"re\":1,\"im\":0}]}' --side left",
      "fock_sarason.schema.json");
}

TEST_CASE("fock embed run matches its schema") {
  expect_report(
      "fock embed --space drury_arveson --dim 2 --poly \"1 + 2*z1*z2\"",
      "fock_embed.schema.json");
}

TEST_CASE("radius run matches its schema") {
  const Json doc = expect_report("radius --n 2", "radius.schema.json");
  CHECK(doc["outputs"]["radius"].get<double>() ==
        doctest::Approx(1.2580046482).epsilon(1e-6));
}

TEST_CASE("examples run matches its schema") {
  const Json doc = expect_report("examples", "examples.schema.json");
  for (const Json& row : doc["outputs"]["rows"])
    CHECK(row["pass"] == true);
}

TEST_CASE("identical invocations are byte-identical") {
  const std::vector<std::string> invocations{
      "factor --space dirichlet --poly \"z-1\"",
      "pick approx --data '{\"space\":{\"family\":\"hardy\"},"
      "\"phi\":\"0.5 + 0.5*z\",\"schedule\":[[[0,0]]]}'",
      "fock sarason --data '{\"dim\":2,\"terms\":[{\"word\":[1],\"re\":1,"
      "\"im\":0}]}' --side right"};
  for (const std::string& args : invocations) {
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("the envelope reflects seed and input digests") {
  const Json a = Json::parse(
      run_cli("factor --space dirichlet --poly \"z-1\" --seed 7").out);
  CHECK(a["seed"] == 7);
  const Json b =
      Json::parse(run_cli("factor --space dirichlet --poly \"z-2\"").out);
  CHECK(a["inputs_digest"] != b["inputs_digest"]);
  CHECK(a["version"] == b["version"]);
}

TEST_CASE("input errors exit 1 with a structured report") {
  expect_error("factor --space dirichlet --poly \"z/2\"", "bad_input");
  expect_error("factor --space dirichlet --poly \"z - z\"", "zero_polynomial");
  expect_error(
      "pick classify --data '{\"space\":{\"family\":\"hardy\"},"
      "\"points\":[[0.2,0],[0.2,0]],\"targets\":[[0,0],[0,0]]}'",
      "coincident_points");
  expect_error(
      "pick classify --data '{\"space\":{\"family\":\"hardy\"},"
      "\"points\":[[1.1,0]],\"targets\":[[0,0]]}'",
      "point_outside_ball");
  expect_error("fock sarason --data '{\"dim\":1,\"terms\":[{\"word\":[1],"
               "\"re\":1,\"im\":0}]}' --max-len 40",
               "budget_exceeded");
}

TEST_CASE("unknown flags exit 1") {
  CHECK(run_cli("factor --space dirichlet --poly \"z-1\" --bogus").exit_code ==
        1);
  CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("an unconverged factorization exits 2 but still reports") {
  const Json doc = expect_report(
      "factor --space dirichlet --poly \"1+3*z-2*z^2+z^3\" --restarts 1 "
      "--tol 1e-30",
      "factor.schema.json", 2);
  CHECK(doc["residuals"]["converged"] == false);
}

TEST_CASE("table mode emits flat text") {
  const RunResult r = run_cli("radius --n 2 --table");
  CHECK(r.exit_code == 0);
  CHECK(!r.out.empty());
  CHECK(r.out[0] != '{');
  CHECK(r.out.find("radius") != std::string::npos);
}

TEST_CASE("the budget env var fills in a missing fock budget") {
  const std::string args =
      "fock outer-defect --data '{\"dim\":4,\"terms\":[{\"word\":[1],"
      "\"re\":1,\"im\":0}]}' --N 1";
  CHECK(run_cli(args).exit_code == 1);
  const RunResult withEnv = run_cli(args, "PICKFACTOR_BUDGET=6");
  CHECK_MESSAGE(withEnv.exit_code == 0, withEnv.out);
}
