#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qkick");
  std::ostringstream out, err;
  const int code = qkick::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("qkick_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, VersionAndHelp) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, qkick::cli::kUsage);
}

TEST(Cli, GraphDotAndJson) {
  const auto dot = run({"graph", "-n", "2"});
  ASSERT_EQ(dot.code, 0) << dot.err;
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
  const auto j = run({"graph", "-n", "4", "--format", "json", "--channels", "Jx,B"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(json::parse(j.out)["nodes"].size(), 8u);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"graph", "-n", "1"}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"graph", "--channels", ""}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"graph", "--channels", "Jz"}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"graph", "--format", "png"}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"simulate", "--variant", "sin", "--m", "5"}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"simulate", "--schedule", "/nonexistent/schedule.json"}).code,
            qkick::cli::kUsage);
  EXPECT_EQ(run({"calibrate", "--m", "0"}).code, qkick::cli::kUsage);
  EXPECT_EQ(run({"oracle", "fidelity", "-n", "3", "--at", "soon"}).code, qkick::cli::kUsage);
}

TEST(Cli, SimulateIsDeterministic) {
  const std::vector<std::string> args = {"simulate", "-n", "3", "--steps", "200"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# command=simulate"), std::string::npos);
  EXPECT_NE(a.out.find("t,alpha_1,"), std::string::npos);
}

TEST(Cli, SimulateJsonAndSummaryFile) {
  const fs::path summary = fs::temp_directory_path() / "qkick_cli_summary.json";
  fs::remove(summary);
  const auto r = run({"simulate", "--variant", "ideal", "-n", "5", "--format", "json",
                      "--summary", summary.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["summary"]["max_alpha_N"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["metadata"]["tool_version"], "0.1.0");
  std::ifstream in(summary);
  EXPECT_EQ(json::parse(in), j);
}

TEST(Cli, ScheduleFile) {
  const auto p = temp_file("sched.json", R"({"variant": "square_delta", "n_sites": 3, "delta": 6})");
  const auto r = run({"simulate", "--schedule", p.string(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["metadata"]["schedule"]["variant"], "square_delta");
  const auto bad = temp_file("bad.json", "{not json");
  EXPECT_EQ(run({"simulate", "--schedule", bad.string()}).code, qkick::cli::kUsage);
}

TEST(Cli, SweepBothSpecForms) {
  const auto kv = temp_file("sweep.txt", "family=sin\nparameter=N\nvalues=2,3\nn_steps=200\n");
  const auto a = run({"sweep", kv.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("param,max_alpha"), std::string::npos);
  const auto js = temp_file(
      "sweep.json", R"({"family": "sin", "parameter": "N", "values": [2, 3], "n_steps": 200})");
  const auto b = run({"sweep", js.string(), "--format", "json", "--threads", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(json::parse(b.out)["rows"].size(), 2u);

  const auto bad = temp_file("sweep_bad.txt", "values=3\nwhatever=1\n");
  EXPECT_EQ(run({"sweep", bad.string()}).code, qkick::cli::kUsage);
  const auto empty = temp_file("sweep_empty.txt", "values=\n");
  EXPECT_EQ(run({"sweep", empty.string()}).code, qkick::cli::kUsage);
}

TEST(Cli, SweepWithFailingRowReportsContractViolation) {
  const auto p = temp_file("sweep_fail.txt", "family=ideal\nvalues=1,3\nn_steps=20\n");
  const auto r = run({"sweep", p.string()});
  EXPECT_EQ(r.code, qkick::cli::kContract);
  EXPECT_NE(r.out.find("1,nan"), std::string::npos);
  EXPECT_NE(r.err.find("row 1"), std::string::npos);
}

TEST(Cli, OracleCompare) {
  const auto r = run({"oracle", "compare", "-n", "3", "--format", "json", "--steps", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(json::parse(r.out)["max_deviation"].get<double>(), 1e-10);
  EXPECT_EQ(run({"oracle", "compare", "-n", "3", "--state", "+0"}).code, qkick::cli::kUsage);
}

TEST(Cli, OracleResourceCap) {
  EXPECT_EQ(run({"oracle", "compare", "-n", "16"}).code, qkick::cli::kResource);
  EXPECT_EQ(run({"oracle", "ghz", "--labels", "0000", "--max-sites", "3"}).code,
            qkick::cli::kResource);
}

TEST(Cli, OracleFidelityAndGhz) {
  const auto f = run({"oracle", "fidelity", "--variant", "ideal", "-n", "3", "--samples", "50"});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_NE(f.out.find("eval_time,samples,seed,mc_mean"), std::string::npos);
  const auto g = run({"oracle", "ghz", "--labels", "+00+"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("+00+,"), std::string::npos);
}

TEST(Cli, CalibrateAndOutputFile) {
  const fs::path out = fs::temp_directory_path() / "qkick_cli_cal.json";
  fs::remove(out);
  const auto r = run({"calibrate", "--shape", "sin", "--m", "4", "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  EXPECT_NEAR(json::parse(in)["amplitude"].get<double>(), 2.0 / 3.0, 1e-13);
  const auto box = run({"calibrate", "--shape", "boxcar", "--out", "-"});
  EXPECT_NEAR(json::parse(box.out)["amplitude"].get<double>(), 2.0, 1e-13);
}
