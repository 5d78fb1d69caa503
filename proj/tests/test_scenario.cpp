#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "folia/scenario.hpp"

using namespace folia;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("folia_scenario_" + name);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig config(const std::string& text, const std::string& dir) {
  ScenarioConfig cfg = parse_config(text);
  cfg.out_dir = dir;
  return cfg;
}

}  // namespace

TEST(ParseConfig, FlatAndNested) {
  const ScenarioConfig a = parse_config(R"({"model":"lax","n":3,"step":0.01,"seed":7,"checks":["spectrum"]})");
  EXPECT_EQ(a.model, "lax");
  EXPECT_EQ(a.n, 3);
  EXPECT_EQ(a.step, 0.01);
  EXPECT_EQ(a.seed, 7u);
  const ScenarioConfig b = parse_config(
      R"({"model":"ermakov","params":{"c1":0.5},"integration":{"t0":1,"t1":3},"output":{"path":"x","format":"csv"}})");
  EXPECT_EQ(b.c1, 0.5);
  EXPECT_EQ(b.t0, 1.0);
  EXPECT_EQ(b.t1, 3.0);
  EXPECT_EQ(b.out_dir, "x");
  EXPECT_EQ(b.format, "csv");
}

TEST(ParseConfig, Rejections) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"n":2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model":"lax","bogus":1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model":"lax","n":"two"})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Validate, Rules) {
  EXPECT_THROW(validate(parse_config(R"({"model":"riccati","checks":["superposition"],"step":-1})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"kepler"})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"lax","t0":2,"t1":1})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"lax","format":"xml"})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"lax","checks":["magic"]})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"riccati","checks":["spectrum"]})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"cfg({"model":"hamilton_jacobi","H":"exp(P1)"})cfg")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"ermakov","checks":["automorphic"]})")), ConfigError);
  EXPECT_THROW(validate(parse_config(R"({"model":"lax","n":0})")), ConfigError);
  EXPECT_NO_THROW(validate(parse_config(R"({"model":"ermakov","c1":0,"c2":0,"checks":["automorphic"]})")));
}

TEST(Run, HamiltonJacobiPasses) {
  const std::string dir = scratch("hj");
  const ScenarioResult r = run(config(
      R"({"model":"hamilton_jacobi","n":2,"H":"sum_cos","checks":["leaf_drift","superposition","automorphic"],"seed":42})",
      dir));
  ASSERT_EQ(r.reports.size(), 3u);
  for (const auto& rep : r.reports) EXPECT_TRUE(rep.passed) << rep.check << " " << rep.value << " " << rep.detail;
  EXPECT_EQ(exit_code(r.reports), 0);
  EXPECT_EQ(r.reports[0].check, "automorphic");
  EXPECT_EQ(r.reports[2].check, "superposition");
  EXPECT_LE(r.reports[2].value, 1e-8);
  EXPECT_EQ(slurp(r.trajectory_path).substr(0, 12), "t,x1,x2,x3,x");
}

TEST(Run, ErmakovLewis) {
  const std::string dir = scratch("ermakov");
  const ScenarioResult r =
      run(config(R"cfg({"model":"ermakov","omega2":"1+0.1*sin(t)","c1":1,"c2":1,"checks":["lewis"]})cfg", dir));
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_TRUE(r.reports[0].passed);
  EXPECT_LE(r.reports[0].value, 1e-6);
}

TEST(Run, EveryCheckOfEveryModel) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"riccati", R"(["foliated","leaf_drift","superposition","convergence"])"},
      {"hamilton_jacobi", R"(["foliated","leaf_drift","superposition","automorphic","convergence"])"},
      {"lax", R"(["foliated","leaf_drift","superposition","automorphic","poisson","spectrum","convergence"])"},
      {"sl2_adjoint", R"(["foliated","leaf_drift","poisson","convergence"])"},
  };
  for (const auto& [model, checks] : cases) {
    const ScenarioResult r =
        run(config(R"({"model":")" + model + R"(","t1":1,"step":0.005,"checks":)" + checks + "}", scratch(model)));
    for (const auto& rep : r.reports) EXPECT_TRUE(rep.passed) << model << " " << rep.check << " " << rep.value
                                                              << " " << rep.detail;
  }
  const ScenarioResult e = run(config(
      R"({"model":"ermakov","c1":0,"c2":0,"t1":1,"step":0.005,"checks":["foliated","leaf_drift","automorphic","lewis","convergence"]})",
      scratch("ermakov_all")));
  for (const auto& rep : e.reports) EXPECT_TRUE(rep.passed) << rep.check << " " << rep.value << " " << rep.detail;
}

TEST(Run, FailingCheckGivesExitOne) {
  const std::string dir = scratch("fail");
  // x' = 1 + x^2 blows up at pi/2
  const ScenarioResult r =
      run(config(R"({"model":"riccati","a0":"1","a1":"0","a2":"1","x0":[0],"t1":3,"checks":["superposition"]})", dir));
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_FALSE(r.reports[0].passed);
  EXPECT_FALSE(r.reports[0].detail.empty());
  EXPECT_EQ(exit_code(r.reports), 1);
  std::ostringstream table;
  print_table(table, r.reports);
  EXPECT_NE(table.str().find("FAIL"), std::string::npos);
}

TEST(Render, EmptyReportsAreHeaderOnly) {
  EXPECT_EQ(render_csv({}), "check,model,status,value,tolerance,runtime_s,seed\n");
  const auto j = nlohmann::json::parse(render_json({}));
  EXPECT_TRUE(j.at("reports").empty());
  std::ostringstream os;
  print_table(os, {});
  const std::string table = os.str();
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1);
  EXPECT_EQ(exit_code({}), 0);
}

TEST(Render, OrderingAndFields) {
  std::vector<CheckReport> reps(3);
  reps[0] = {"spectrum", "lax", true, 1e-14, 1e-12, 0.1, 42, ""};
  reps[1] = {"foliated", "lax", false, 1.0, 1e-6, 0.2, 42, "boom"};
  reps[2] = {"foliated", "ermakov", true, 0.0, 1e-6, 0.3, 42, ""};
  const auto sorted = ordered(reps);
  EXPECT_EQ(sorted[0].model, "ermakov");
  EXPECT_EQ(sorted[1].model, "lax");
  EXPECT_EQ(sorted[2].check, "spectrum");
  const auto j = nlohmann::json::parse(render_json(sorted));
  for (const auto& row : j.at("reports"))
    for (const auto* key : {"check", "status", "value", "tolerance", "runtime_s", "seed", "model"})
      EXPECT_TRUE(row.contains(key)) << key;
  EXPECT_EQ(j["reports"][1]["status"], "fail");
  EXPECT_EQ(j["reports"][1]["detail"], "boom");
  EXPECT_EQ(exit_code(sorted), 1);
}

TEST(Run, DeterministicValues) {
  const std::string text = R"({"model":"lax","n":2,"checks":["automorphic","spectrum","superposition"],"seed":5})";
  const ScenarioResult a = run(config(text, scratch("det_a")));
  const ScenarioResult b = run(config(text, scratch("det_b")));
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].check, b.reports[i].check);
    EXPECT_EQ(std::memcmp(&a.reports[i].value, &b.reports[i].value, sizeof(double)), 0);
  }
  EXPECT_EQ(slurp(a.trajectory_path), slurp(b.trajectory_path));
}

TEST(Run, CsvFormat) {
  const std::string dir = scratch("csv");
  ScenarioConfig cfg = config(R"({"model":"lax","format":"csv","checks":["spectrum"]})", dir);
  const ScenarioResult r = run(cfg);
  EXPECT_EQ(fs::path(r.report_path).filename(), "report.csv");
  EXPECT_EQ(slurp(r.report_path).substr(0, 5), "check");
}
