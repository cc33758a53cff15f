#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rangesim_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const std::string out = tmp("stdout"), err = tmp("stderr");
    const std::string cmd = std::string("'") + RANGESIM_CLI + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = rangesim::testing::slurp(out);
    r.err = rangesim::testing::slurp(err);
    return r;
  }

  static std::string scenario(const std::string& name) {
    return "'" + rangesim::testing::source_path("scenarios/" + name) + "'";
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwoOnStderr) {
  for (const char* args : {"", "frobnicate", "simulate", "paths --scenario x --k nope", "simulate --scenario x --rounds 0"}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 2) << args;
    EXPECT_TRUE(r.out.empty()) << args;
    EXPECT_FALSE(r.err.empty()) << args;
  }
  EXPECT_EQ(run("frobnicate").err.rfind("usage error: ", 0), 0u);
}

TEST_F(Cli, HelpGoesToStdout) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(Cli, ValidateReportsOnStdoutAndExitsByValidity) {
  const auto ok = run("validate --scenario " + scenario("marine_ranch.scenario.json"));
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(ok.err.empty());
  EXPECT_EQ(nlohmann::json::parse(ok.out)["valid"], true);

  auto doc = nlohmann::ordered_json::parse(rangesim::testing::slurp(
      rangesim::testing::source_path("scenarios/marine_ranch.scenario.json")));
  doc["elements"]["capability_refs"].push_back("no-such-cap");
  std::ofstream(tmp("broken.json")) << doc.dump(2);
  const auto bad = run("validate --scenario '" + tmp("broken.json") + "'");
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(nlohmann::json::parse(bad.out)["valid"], false);
  EXPECT_NE(bad.err.find("UnresolvedCapability"), std::string::npos);
}

TEST_F(Cli, InputFailuresExitOneWithoutStdout) {
  const auto missing = run("validate --scenario '" + tmp("absent.json") + "'");
  EXPECT_EQ(missing.code, 1);
  EXPECT_TRUE(missing.out.empty());
  EXPECT_FALSE(missing.err.empty());

  std::ofstream(tmp("bad.json")) << "{";
  const auto malformed = run("validate --scenario '" + tmp("bad.json") + "'");
  EXPECT_EQ(malformed.code, 1);
  EXPECT_TRUE(malformed.out.empty());
  EXPECT_EQ(malformed.err.rfind("MalformedDocument", 0), 0u);
}

TEST_F(Cli, PathsFromTheMaintenanceEndpoint) {
  const auto r = run("paths --scenario " + scenario("marine_ranch.scenario.json") +
                     " --entry maint-1 --target class:controller -k 3");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_FALSE(j["paths"].empty());
  const auto& top = j["paths"][0];
  EXPECT_EQ(top["steps"][0]["source"], "EXTERNAL");
  EXPECT_EQ(top["steps"].back()["target"], "ctl-1");
  EXPECT_NEAR(top["success_prob"].get<double>(), 0.4 * 0.6 * 0.8, 1e-12);

  const auto unknown = run("paths --scenario " + scenario("marine_ranch.scenario.json") +
                           " --entry nobody --target class:controller");
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("UnknownEntryNode"), std::string::npos);
}

TEST_F(Cli, SimulateWritesTraceAndMetrics) {
  const auto r = run("simulate --scenario " + scenario("marine_ranch.scenario.json") + " --strategy " +
                     scenario("marine_ranch.strategy.json") + " --seed 5 --rounds 15 --trace '" + tmp("trace.json") +
                     "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto metrics = nlohmann::json::parse(r.out);
  EXPECT_TRUE(metrics.contains("compromised_fraction"));
  const auto trace = nlohmann::json::parse(rangesim::testing::slurp(tmp("trace.json")));
  EXPECT_EQ(trace["config"]["seed"], 5);
  EXPECT_EQ(trace["config"]["max_rounds"], 15);
  EXPECT_EQ(trace["scenario_digest"].get<std::string>().size(), 64u);
  EXPECT_EQ(run("simulate --scenario " + scenario("marine_ranch.scenario.json") + " --strategy " +
                scenario("marine_ranch.strategy.json") + " --seed 5 --rounds 15")
                .out,
            r.out);
}

TEST_F(Cli, BatchIsThreadIndependent) {
  const std::string base = "batch --scenario " + scenario("marine_ranch.scenario.json") + " --seed 9 -n 40";
  const auto one = run(base + " --threads 1");
  const auto four = run(base + " --threads 4");
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(nlohmann::json::parse(one.out)["runs"], 40);
}

TEST_F(Cli, GenerateSucceedsOrFailsWithExitCode) {
  const auto ok = run("generate --requirement " + scenario("marine_ranch.requirement.json") +
                      " --seed 7 --max-iterations 5 --out '" + tmp("gen.json") + "' --report '" + tmp("report.json") +
                      "' --strategy-out '" + tmp("strategy.json") + "'");
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto spec = nlohmann::json::parse(rangesim::testing::slurp(tmp("gen.json")));
  EXPECT_EQ(spec["domain_context"]["domain_tag"], "marine-ranch");
  EXPECT_EQ(nlohmann::json::parse(rangesim::testing::slurp(tmp("report.json")))["final_valid"], true);
  const auto validated = run("validate --scenario '" + tmp("gen.json") + "'");
  EXPECT_EQ(validated.code, 0) << validated.out;
  const auto simulated = run("simulate --scenario '" + tmp("gen.json") + "' --strategy '" + tmp("strategy.json") + "'");
  EXPECT_EQ(simulated.code, 0) << simulated.err;

  std::ofstream(tmp("impossible.json")) << R"({"domain_tag": "x", "narrative": "cannot be met",
    "constraints": {"max_nodes": 2, "required_classes": ["sensor", "controller"],
                    "attacker_profile": "targeted", "target_class": "camera_server"}})";
  const auto failed = run("generate --requirement '" + tmp("impossible.json") + "' --max-iterations 3 --report '" +
                          tmp("failed.json") + "'");
  EXPECT_EQ(failed.code, 1);
  EXPECT_NE(failed.err.find("GenerationFailed"), std::string::npos);
  const auto report = nlohmann::json::parse(rangesim::testing::slurp(tmp("failed.json")));
  EXPECT_EQ(report["iterations_used"], 3);
  EXPECT_EQ(report["final_valid"], false);
}

TEST_F(Cli, CapabilitiesAndDot) {
  const auto list = run("capabilities list");
  EXPECT_EQ(list.code, 0);
  EXPECT_EQ(std::count(list.out.begin(), list.out.end(), '\n'), 10);
  const auto dot = run("export-dot --scenario " + scenario("marine_ranch.scenario.json"));
  EXPECT_EQ(dot.code, 0);
  EXPECT_EQ(dot.out.rfind("digraph spidersim {\n", 0), 0u);
}

}  // namespace
