// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

#include "qgssl/harness.hpp"
#include "test_support.hpp"

namespace qgssl {
namespace {

using nlohmann::json;
using testing::TempDir;
namespace fs = std::filesystem;

// Enough of JSON Schema for docs/schema.json: $ref into $defs, type, const,
// enum, required, properties, additionalProperties=false, items, min/maxItems,
// minimum, maximum, exclusiveMinimum.
class SchemaChecker {
 public:
  explicit SchemaChecker(json root) : root_(std::move(root)) {}

  std::vector<std::string> check(const json& doc) const {
    std::vector<std::string> errors;
    visit(root_, doc, "$", errors);
    return errors;
  }

 private:
  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    return false;
  }

  void visit(const json& s, const json& v, const std::string& at,
             std::vector<std::string>& errors) const {
    if (s.contains("$ref")) {
      const std::string ref = s["$ref"];
      const std::string prefix = "#/$defs/";
      visit(root_["$defs"][ref.substr(prefix.size())], v, at, errors);
      return;
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t);
      } else {
        ok = has_type(v, s["type"]);
      }
      if (!ok) {
        errors.push_back(at + ": wrong type");
        return;
      }
    }
    if (s.contains("const") && v != s["const"]) errors.push_back(at + ": const mismatch");
    if (s.contains("enum") &&
        std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
      errors.push_back(at + ": not in enum");
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s["minimum"].get<double>()) errors.push_back(at + ": < minimum");
      if (s.contains("maximum") && x > s["maximum"].get<double>()) errors.push_back(at + ": > maximum");
      if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) {
        errors.push_back(at + ": <= exclusiveMinimum");
      }
    }
    if (v.is_object()) {
      for (const auto& r : s.value("required", json::array())) {
        if (!v.contains(r.get<std::string>())) errors.push_back(at + ": missing " + r.get<std::string>());
      }
      const json props = s.value("properties", json::object());
      for (const auto& item : v.items()) {
        if (props.contains(item.key())) {
          visit(props[item.key()], item.value(), at + "." + item.key(), errors);
        } else if (s.contains("additionalProperties") && !s["additionalProperties"].get<bool>()) {
          errors.push_back(at + ": unexpected key " + item.key());
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
        errors.push_back(at + ": too few items");
      }
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
        errors.push_back(at + ": too many items");
      }
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          visit(s["items"], v[i], at + "[" + std::to_string(i) + "]", errors);
        }
      }
    }
  }

  json root_;
};

std::string iris_config(const std::string& name, const std::string& extra = "") {
  return R"({"name": ")" + name + R"(", "dataset": "iris", "seeds": [0, 1, 2], "qubits": 5)" +
         extra + "}";
}

json strip_clock(json doc) {
  doc.erase("timestamp");
  doc.erase("wall_clock_seconds");
  return doc;
}

fs::path only_result(const fs::path& dir) {
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().filename() == "result.json") return e.path();
  }
  return {};
}

TEST(Config, ParsesDefaultsAndOverrides) {
  const auto c = parse_experiment_config(
      R"({"name": "x", "dataset": "wine", "method": "ilqssl", "propagation": {"alpha2": -0.1}})",
      "inline");
  EXPECT_EQ(c.pipeline.method, Method::kIlqssl);
  EXPECT_EQ(c.pipeline.propagation.alpha2, -0.1);
  EXPECT_EQ(c.pipeline.propagation.alpha1, 1.0);
  EXPECT_EQ(c.seeds.size(), 10u);
  EXPECT_FALSE(c.rb_noise.has_value());
  const auto back = parse_experiment_config(c.to_json().dump(), "echo");
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Config, SyntaxErrorCarriesLineNumber) {
  const std::string text = "{\n  \"name\": \"x\",\n  \"dataset\": iris\n}\n";
  try {
    parse_experiment_config(text, "broken.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("broken.json"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  }
}

TEST(Config, RejectsBadContent) {
  EXPECT_THROW(parse_experiment_config(R"({"dataset": "iris", "colour": 1})", "a"), ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"dataset": "iris", "propagation": {"beta": 1}})", "a"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"dataset": "iris", "seeds": []})", "a"), ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"dataset": "iris", "qubits": "many"})", "a"),
               ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"dataset": "iris", "method": "svm"})", "a"), ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"name": "x"})", "a"), ConfigError);
  EXPECT_THROW(parse_experiment_config("[1, 2]", "a"), ConfigError);
}

TEST(Config, BundledConfigsLoad) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(QGSSL_TEST_CONFIG_DIR)) {
    if (e.path().filename() == "grid_default.json") {
      const SearchGrid g = load_search_grid(e.path());
      EXPECT_EQ(g.k_neighbors, (std::vector<int>{5, 10, 15}));
      EXPECT_EQ(g.qubits.size(), 5u);
      continue;
    }
    const auto c = load_experiment_config(e.path());
    EXPECT_NO_THROW(resolve_dataset(c.dataset, c.base_dir)) << e.path();
    ++count;
  }
  EXPECT_EQ(count, 12);
}

TEST(Datasets, ResolveByNameAndPath) {
  EXPECT_EQ(resolve_dataset("iris", {}).filename(), "iris.csv");
  EXPECT_THROW(resolve_dataset("no_such_set", {}), DataError);
  EXPECT_THROW(resolve_dataset("./missing.csv", {}), DataError);
  const auto direct = testing::data_path("wine");
  EXPECT_EQ(resolve_dataset(direct.string(), {}), direct);
  EXPECT_EQ(resolve_dataset("wine.csv", QGSSL_TEST_DATA_DIR), fs::path(QGSSL_TEST_DATA_DIR) / "wine.csv");
}

TEST(Lists, IntAndSeedParsing) {
  EXPECT_EQ(parse_int_list("4,6,8"), (std::vector<int>{4, 6, 8}));
  EXPECT_THROW(parse_int_list("4,x"), std::invalid_argument);
  EXPECT_THROW(parse_int_list(""), std::invalid_argument);
  EXPECT_EQ(parse_seed_list("0-3,7"), (std::vector<std::uint64_t>{0, 1, 2, 3, 7}));
  EXPECT_THROW(parse_seed_list("5-2"), std::invalid_argument);
}

TEST(CliRun, WritesValidDeterministicResults) {
  TempDir tmp;
  const auto cfg = tmp.write("iris_small.json", iris_config("iris_small"));
  std::ostringstream out, err;
  RunOverrides o;
  o.out = tmp.path() / "out";
  ASSERT_EQ(cli_run(cfg, o, out, err), 0) << err.str();
  const auto ra = only_result(tmp.path() / "out");
  ASSERT_FALSE(ra.empty());
  ASSERT_EQ(cli_run(cfg, o, out, err), 0) << err.str();
  fs::path rb;
  for (const auto& e : fs::recursive_directory_iterator(tmp.path() / "out")) {
    if (e.path().filename() == "result.json" && e.path() != ra) rb = e.path();
  }
  ASSERT_FALSE(rb.empty());
  EXPECT_TRUE(fs::exists(ra.parent_path() / "metrics.csv"));
  EXPECT_TRUE(fs::exists(ra.parent_path() / "roc.csv"));
  EXPECT_EQ(ra.parent_path().parent_path().filename(), "iris_small");

  const json a = json::parse(testing::slurp(ra));
  const json b = json::parse(testing::slurp(rb));
  EXPECT_EQ(strip_clock(a).dump(2), strip_clock(b).dump(2));
  EXPECT_EQ(a["aggregate"]["seed_count"], 3);
  EXPECT_EQ(a["runs"].size(), 3u);

  const SchemaChecker schema(json::parse(testing::slurp(QGSSL_TEST_SCHEMA)));
  const auto errors = schema.check(a);
  EXPECT_TRUE(errors.empty()) << errors.front();
}

TEST(CliRun, SchemaRejectsTamperedDocument) {
  TempDir tmp;
  const auto cfg = tmp.write("c.json", iris_config("c", R"(, "method": "label_propagation")"));
  std::ostringstream out, err;
  RunOverrides o;
  o.out = tmp.path();
  o.seeds = std::vector<std::uint64_t>{4};
  ASSERT_EQ(cli_run(cfg, o, out, err), 0) << err.str();
  json doc = json::parse(testing::slurp(only_result(tmp.path())));
  const SchemaChecker schema(json::parse(testing::slurp(QGSSL_TEST_SCHEMA)));
  EXPECT_TRUE(schema.check(doc).empty());
  doc["runs"][0]["metrics"]["accuracy"] = 1.5;
  doc["surprise"] = true;
  EXPECT_EQ(schema.check(doc).size(), 2u);
}

TEST(CliRun, ExitCodes) {
  TempDir tmp;
  std::ostringstream out, err;
  RunOverrides o;
  o.out = tmp.path();
  const auto missing = tmp.write("m.json", R"({"name": "m", "dataset": "./nowhere.csv"})");
  EXPECT_EQ(cli_run(missing, o, out, err), 1);
  EXPECT_EQ(cli_run(tmp.path() / "absent.json", o, out, err), 1);
  const auto syntax = tmp.write("s.json", "{\n\"name\": }\n");
  std::ostringstream serr;
  EXPECT_EQ(cli_run(syntax, o, out, serr), 1);
  EXPECT_NE(serr.str().find("line 2"), std::string::npos) << serr.str();

  const auto diverge = tmp.write("d.json", iris_config("d", R"(, "propagation": {"alpha2": 1.5})"));
  std::ostringstream derr;
  EXPECT_EQ(cli_run(diverge, o, out, derr), 2);
  EXPECT_NE(derr.str().find("alpha2 = 1.5"), std::string::npos) << derr.str();
  EXPECT_NE(derr.str().find("alpha1 = 1"), std::string::npos) << derr.str();

  const auto slow =
      tmp.write("n.json", iris_config("n", R"(, "propagation": {"max_iter": 3})"));
  EXPECT_EQ(cli_run(slow, o, out, err), 2);
}

TEST(CliRb, NoiselessFitIsExact) {
  TempDir tmp;
  RbConfig c;
  c.repetitions = 5;
  c.shots = 20;
  std::ostringstream out, err;
  ASSERT_EQ(cli_rb(c, tmp.path() / "rb", out, err), 0) << err.str();
  const json doc = json::parse(testing::slurp(tmp.path() / "rb" / "rb.json"));
  EXPECT_EQ(doc["fit"]["p"], 1.0);
  EXPECT_EQ(doc["fidelity"], 1.0);
  EXPECT_TRUE(fs::exists(tmp.path() / "rb" / "rb_survival.csv"));
  RbConfig bad = c;
  bad.qubits = 4;
  EXPECT_EQ(cli_rb(bad, tmp.path() / "rb", out, err), 1);
}

TEST(CliSweepAndTune, WriteTables) {
  TempDir tmp;
  const auto cfg = tmp.write("t.json", iris_config("t"));
  RunOverrides o;
  o.out = tmp.path();
  o.seeds = std::vector<std::uint64_t>{0, 1};
  std::ostringstream out, err;
  ASSERT_EQ(cli_sweep(cfg, "qubits", {4, 6}, o, 0.02, out, err), 0) << err.str();
  const std::string csv = testing::slurp(tmp.path() / "t" / "sweep_qubits.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(cli_sweep(cfg, "depth", {4}, o, 0.02, out, err), 1);

  const auto grid = tmp.write("g.json", R"({"k_neighbors": [5, 10], "qubits": [4]})");
  ASSERT_EQ(cli_tune(cfg, grid, o, out, err), 0) << err.str();
  const std::string board = testing::slurp(tmp.path() / "t" / "leaderboard.csv");
  EXPECT_EQ(board.rfind("rank,", 0), 0u);
  EXPECT_EQ(std::count(board.begin(), board.end(), '\n'), 3);
  const json best = json::parse(testing::slurp(tmp.path() / "t" / "best_config.json"));
  EXPECT_NO_THROW(parse_experiment_config(best.dump(), "best"));
}

TEST(Report, SortedAndOrderInvariant) {
  TempDir tmp;
  RunOverrides o;
  o.seeds = std::vector<std::uint64_t>{0};
  std::ostringstream out, err;
  // Write in two different orders; the reports must match byte for byte.
  const std::vector<std::string> methods{"label_propagation", "ipqssl", "ilqssl"};
  for (const std::string order : {"fwd", "rev"}) {
    o.out = tmp.path() / order;
    std::vector<std::string> m = methods;
    if (order == "rev") std::reverse(m.begin(), m.end());
    for (const auto& method : m) {
      const auto cfg = tmp.write(method + ".json", iris_config(method, R"(, "method": ")" + method + "\""));
      ASSERT_EQ(cli_run(cfg, o, out, err), 0) << err.str();
    }
    ASSERT_EQ(cli_report(tmp.path() / order, tmp.path() / ("report_" + order), out, err), 0)
        << err.str();
  }
  auto table = [&](const std::string& order) {
    std::string t = testing::slurp(tmp.path() / ("report_" + order) / "report.csv");
    // drop the source column, which embeds timestamped directory names
    std::string cleaned;
    std::istringstream in(t);
    for (std::string line; std::getline(in, line);) cleaned += line.substr(0, line.rfind(',')) + "\n";
    return cleaned;
  };
  EXPECT_EQ(table("fwd"), table("rev"));
  const std::string t = table("fwd");
  const auto ilq = t.find("iris,ilqssl");
  const auto ipq = t.find("iris,ipqssl");
  const auto lp = t.find("iris,label_propagation");
  ASSERT_NE(lp, std::string::npos);
  EXPECT_LT(ilq, ipq);
  EXPECT_LT(ipq, lp);
  EXPECT_TRUE(fs::exists(tmp.path() / "report_fwd" / "roc_iris_ipqssl.csv"));
}

TEST(Report, Errors) {
  TempDir tmp;
  EXPECT_THROW(make_report(tmp.path(), tmp.path() / "out"), ConfigError);
  EXPECT_THROW(make_report(tmp.path() / "none", tmp.path() / "out"), ConfigError);
  const auto cfg = tmp.write("v.json", iris_config("v"));
  RunOverrides o;
  o.out = tmp.path() / "res";
  o.seeds = std::vector<std::uint64_t>{0};
  std::ostringstream out, err;
  ASSERT_EQ(cli_run(cfg, o, out, err), 0);
  json doc = json::parse(testing::slurp(only_result(tmp.path() / "res")));
  doc["schema_version"] = 99;
  tmp.write("res/old/x/result.json", doc.dump());
  try {
    make_report(tmp.path() / "res", tmp.path() / "out");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mixed result schema versions"), std::string::npos);
  }
  EXPECT_EQ(cli_report(tmp.path() / "res", tmp.path() / "out", out, err), 1);
}

TEST(Experiment, RbNoiseFillsScore) {
  auto c = parse_experiment_config(
      R"({"name": "rb", "dataset": "iris", "seeds": [0], "qubits": 4, "rb_noise": 0.02})", "x");
  const auto r = run_experiment(c);
  const double s = r.runs[0].diagnostics.rb_score;
  EXPECT_GT(s, 0.4);
  EXPECT_LT(s, 1.0);
}

TEST(Experiment, DataDirEnvironmentOverride) {
  TempDir tmp;
  fs::copy_file(testing::data_path("iris"), tmp.path() / "flowers.csv");
  fs::copy_file(fs::path(QGSSL_TEST_DATA_DIR) / "iris.schema.json",
                tmp.path() / "flowers.schema.json");
  ::setenv("QGSSL_DATA_DIR", tmp.path().c_str(), 1);
  EXPECT_EQ(resolve_dataset("flowers", {}), tmp.path() / "flowers.csv");
  EXPECT_THROW(resolve_dataset("iris", {}), DataError);
  ::unsetenv("QGSSL_DATA_DIR");
  EXPECT_NO_THROW(resolve_dataset("iris", {}));
}

}  // namespace
}  // namespace qgssl
