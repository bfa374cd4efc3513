#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "harnack/scenario.h"

using namespace harnack;
using nlohmann::json;

namespace {

const std::string kDir = HARNACK_SCENARIO_DIR;

json base_doc() {
  return json::parse(R"({
    "dim": 2,
    "A": [[-1.0, 0.5], [0.0, -0.7]],
    "R": [[1.0, 0.2], [0.2, 0.5]],
    "defaults": {"n": 2000, "K": 32, "seed": 4},
    "checks": [
      {"id": "h", "type": "harnack", "t": 1.0, "x": [0.3, 0.0], "y": [0.0, 0.1], "alpha": 2.0, "f": "sigmoid"},
      {"id": "k", "type": "kernel", "t": 0.5, "x": [0.3, 0.0], "y": [0.0, 0.1], "alpha": 2.0},
      {"id": "e", "type": "entropy_cost", "t": 1.0, "nu": {"mean": [0.5, 0.5]}}
    ]
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Parse, ValidDocument) {
  const Scenario s = parse_scenario(base_doc());
  EXPECT_EQ(s.model.dim(), 2);
  EXPECT_EQ(s.defaults.n, 2000);
  ASSERT_EQ(s.checks.size(), 3u);
  EXPECT_EQ(s.checks[1].type, "kernel");
}

TEST(Parse, RoundTripIsIdempotent) {
  for (const char* name : {"scalar_ou.json", "jump_2d.json", "semilinear.json", "sharp_harnack.json"}) {
    const Scenario a = load_scenario(kDir + "/" + name);
    const json once = to_json(a);
    const json twice = to_json(parse_scenario(once));
    EXPECT_EQ(once, twice) << name;
  }
}

TEST(Parse, FieldPathsOnErrors) {
  json d = base_doc();
  d["R"] = {{1.0, 0.5}, {0.0, 1.0}};
  EXPECT_EQ(error_path(d), "/R");
  d = base_doc();
  d["R"] = {{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_EQ(error_path(d), "/R");
  d = base_doc();
  d["A"][1] = {1.0};
  EXPECT_EQ(error_path(d), "/A/1");
  d = base_doc();
  d.erase("dim");
  EXPECT_EQ(error_path(d), "/dim");
  d = base_doc();
  d["checks"][0]["x"] = {1.0};
  EXPECT_EQ(error_path(d), "/checks/0/x");
  d = base_doc();
  d["checks"][0]["f"] = "cubic";
  EXPECT_EQ(error_path(d), "/checks/0/f");
  d = base_doc();
  d["checks"][0].erase("alpha");
  EXPECT_EQ(error_path(d), "/checks/0/alpha");
  d = base_doc();
  d["checks"][1]["type"] = "magic";
  EXPECT_EQ(error_path(d), "/checks/1/type");
  d = base_doc();
  d["checks"][2]["id"] = "h";
  EXPECT_EQ(error_path(d), "/checks/2/id");
  d = base_doc();
  d["checks"][0]["alphaa"] = 2.0;
  EXPECT_EQ(error_path(d), "/checks/0/alphaa");
  d = base_doc();
  d["jump"] = {{"rate", 1.0}, {"atoms", {{{"value", {1.0, 0.0}}, {"prob", 0.4}}}}};
  EXPECT_EQ(error_path(d), "/jump");
  d = base_doc();
  d["checks"][0]["bound_mode"] = "h_function";
  EXPECT_EQ(error_path(d), "/checks/0/h");
  d = base_doc();
  d["checks"].push_back({{"id", "s"}, {"type", "semilinear_harnack"}, {"t", 1.0}, {"x", {0.0, 0.0}},
                         {"y", {0.0, 0.0}}, {"alpha", 3.0}, {"p", 2.0}, {"q", 2.0}, {"F", "zero"}, {"f", "sigmoid"}});
  EXPECT_EQ(error_path(d), "/checks/3/alpha");
}

TEST(Parse, SyntaxErrorsCarryLineAndColumn) {
  const std::string path = ::testing::TempDir() + "/broken.json";
  std::ofstream(path) << "{\n  \"dim\": 1,\n  \"A\": [[-1]\n";
  try {
    load_scenario(path);
    FAIL() << "expected an error";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.json:4:1"), std::string::npos) << e.what();
  }
}

TEST(Run, ScalarSuiteExitsZero) {
  const Scenario s = load_scenario(kDir + "/scalar_ou.json");
  RunOverrides o;
  o.samples = 20000;
  const auto reports = run_scenario(s, o);
  EXPECT_EQ(exit_code(reports), 0);
  EXPECT_GT(reports.size(), s.checks.size());  // multi-report checks
  for (const auto& r : reports) EXPECT_EQ(r.seed, s.defaults.seed);
}

TEST(Run, OnlyIdAndOverrides) {
  const Scenario s = parse_scenario(base_doc());
  RunOverrides o;
  o.seed = 123;
  const auto reports = run_scenario(s, o, std::string("h"));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].seed, 123u);
  EXPECT_EQ(reports[0].params["n"], 2000);
  EXPECT_THROW(run_scenario(s, o, std::string("nope")), ScenarioError);
}

TEST(Run, TightScenarioIsInconclusive) {
  const auto reports = run_scenario(load_scenario(kDir + "/tight_n100.json"), {});
  EXPECT_EQ(exit_code(reports), 2);
}

TEST(Run, ExitCodePriority) {
  CheckReport ok, bad, unsure;
  ok.verdict = Verdict::kHolds;
  bad.verdict = Verdict::kViolated;
  unsure.verdict = Verdict::kInconclusive;
  EXPECT_EQ(exit_code({ok}), 0);
  EXPECT_EQ(exit_code({ok, unsure}), 2);
  EXPECT_EQ(exit_code({unsure, bad, ok}), 1);
}

TEST(Run, SameReportsForAnyWorkerCount) {
  const Scenario s = parse_scenario(base_doc());
  RunOverrides par, ser;
  ser.policy = ExecPolicy::kSerial;
  std::ostringstream a, b;
  write_csv(a, run_scenario(s, par));
  write_csv(b, run_scenario(s, ser));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, ParseAndGrid) {
  const SweepSpec s = parse_sweep("dx:0:2:4");
  EXPECT_EQ(s.name, "dx");
  EXPECT_EQ(s.grid(), (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
  EXPECT_THROW(parse_sweep("dx:0:2"), ScenarioError);
  EXPECT_THROW(parse_sweep("dx:0:b:3"), ScenarioError);
  EXPECT_THROW(parse_sweep("dx:0:1:0"), ScenarioError);
}

TEST(Sweep, AppliesValues) {
  const Scenario s = parse_scenario(base_doc());
  const CheckSpec& h = s.checks[0];
  EXPECT_EQ(apply_sweep_value(h, "alpha", 3.5).params["alpha"], 3.5);
  EXPECT_EQ(apply_sweep_value(h, "x0", -1.0).params["x"][0], -1.0);
  const CheckSpec moved = apply_sweep_value(h, "dx", 0.25);
  EXPECT_EQ(moved.params["x"][0], 0.25);
  EXPECT_EQ(moved.params["x"][1], 0.1);
  EXPECT_THROW(apply_sweep_value(h, "f", 1.0), ScenarioError);
}

TEST(Sweep, SharpHarnackMarginTouchesZero) {
  const Scenario s = load_scenario(kDir + "/sharp_harnack.json");
  const auto rows = run_sweep(s, parse_sweep("dx:0:2:8"), {}, std::string("sharp"));
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& row : rows) {
    if (row.value == 1.0) {
      EXPECT_EQ(row.report.verdict, Verdict::kHoldsEquality);
    } else {
      EXPECT_GT(row.report.margin, 0.0) << row.value;
    }
  }
}

TEST(Sweep, HeatKernelDecaysLikeClosedForm) {
  const Scenario s = load_scenario(kDir + "/scalar_ou.json");
  const auto rows = run_sweep(s, parse_sweep("t:0.5:3:5"), {}, std::string("kernel"));
  for (const auto& row : rows) {
    if (row.report.check_id != "kernel/entropy") continue;
    const double e = std::exp(-2.0 * row.value);
    EXPECT_NEAR(row.report.lhs, 0.5 * e / (1.0 - e), 1e-12);  // x - y = 1
  }
}

TEST(Sweep, HyperConstantNondecreasingInEps) {
  const Scenario s = load_scenario(kDir + "/scalar_ou.json");
  const auto rows = run_sweep(s, parse_sweep("eps:0:2:10"), {}, std::string("hyper"));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].report.rhs, rows[i - 1].report.rhs);
}

TEST(Writers, CsvQuotingAndNumbers) {
  CheckReport r = make_report("c1", "harnack", 1.5, std::numeric_limits<double>::infinity(), 0.0, 0.0, 7);
  r.params = {{"f", "exp:1"}, {"x", {1.0}}};
  std::ostringstream out;
  write_csv(out, {r});
  EXPECT_EQ(out.str(),
            "check_id,param_json,lhs,rhs,lhs_se,rhs_se,margin,verdict,seed\n"
            "c1,\"{\"\"f\"\":\"\"exp:1\"\",\"\"x\"\":[1.0]}\",1.5,inf,0,0,inf,TRIVIAL_INFINITE_RHS,7\n");
  std::ostringstream js;
  write_jsonl(js, {r});
  const json row = json::parse(js.str());
  EXPECT_EQ(row["rhs"], "inf");
  EXPECT_EQ(row["verdict"], "TRIVIAL_INFINITE_RHS");
  EXPECT_EQ(row["param_json"]["f"], "exp:1");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

}  // namespace
