#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace rotting;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rotting_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string small_config() {
  return R"([experiment]
horizon = 400
repetitions = 3
seed = 11

[profile]
sigma2 = 0.2
mode = resampled
arms = 3
family = plateau
theta = 0.1, 0.2, 0.3
constant_min = 0
constant_max = 0.5

[policy]
type = oracle

[policy]
type = wswa
alpha = 0.2

[policy]
type = dcto_sim_ucb

[policy]
type = swucb
tau = 100

[grid]
policy = swucb
parameter = tau
values = 50, 100
)";
}

}  // namespace

TEST(Cli, MdiffMatchesLibrary) {
  const auto r = invoke({"theory", "mdiff", "--family", "power", "--theta", "0.1,0.4", "--sigma2", "0.2", "--k", "2",
                         "--delta", "0.1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"].get<std::int64_t>(), m_diff_upper_bound(power_family({0.1, 0.4}), 0.1, 2, 0.2).budget);
}

TEST(Cli, TheoryValues) {
  auto r = invoke({"theory", "bal", "--family", "power", "--theta", "0.1,0.49", "--n", "10"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"].get<std::int64_t>(), 79433);

  r = invoke({"theory", "det", "--theta", "0.1,0.4", "--sigma2", "1", "--n", "1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"], "inf");

  r = invoke({"theory", "wbound", "--theta", "0.3", "--sigma2", "0.2", "--T", "1000"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"].get<std::int64_t>(), 1);
}

TEST(Cli, TsimReportsCapAsRuntimeError) {
  const auto r = invoke({"theory", "tsim", "--theta", "0.1,0.4", "--sigma2", "0.2", "--k", "2"});
  EXPECT_EQ(r.code, cli::kRuntime);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
}

TEST(Cli, VerifyReportsAllChecks) {
  auto r = invoke({"verify", "--family", "power", "--theta", "0.2,0.3", "--sigma2", "0.2"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 3u);

  r = invoke({"verify", "--family", "constant", "--theta", "0.1,0.4", "--sigma2", "0.2", "--cap", "1000",
              "--t-cap", "100000"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["all_passed"].get<bool>());
}

TEST(Cli, RunIsByteIdenticalAcrossInvocations) {
  const auto dir = scratch("run");
  write_text(dir / "small.cfg", small_config());
  const auto cfg = (dir / "small.cfg").string();
  auto a = invoke({"run", "--config", cfg, "--out", (dir / "a").string(), "--threads", "1"});
  auto b = invoke({"run", "--config", cfg, "--out", (dir / "b").string(), "--threads", "3"});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  ASSERT_EQ(b.code, cli::kOk) << b.err;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    ++files;
    EXPECT_EQ(read_text(entry.path()), read_text(dir / "b" / entry.path().filename())) << entry.path();
  }
  EXPECT_EQ(files, 6u);  // four regret curves, end regrets, summary
  EXPECT_TRUE(fs::exists(dir / "a" / "end_regret.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "a" / "mean_regret_dcto_sim_ucb.csv"));
}

TEST(Cli, CompareReadsRunOutput) {
  const auto dir = scratch("compare");
  write_text(dir / "small.cfg", small_config());
  ASSERT_EQ(invoke({"run", "--config", (dir / "small.cfg").string(), "--out", dir.string()}).code, cli::kOk);
  const auto r = invoke({"compare", "--samples", (dir / "end_regret.csv").string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["repetitions"].get<int>(), 3);
  EXPECT_EQ(j["policies"].size(), 4u);

  const auto summary = nlohmann::json::parse(read_text(dir / "summary.json"));
  EXPECT_EQ(summary["comparison"]["wins"], j["wins"]);
}

TEST(Cli, GridWritesTables) {
  const auto dir = scratch("grid");
  write_text(dir / "small.cfg", small_config());
  const auto r = invoke({"grid", "--config", (dir / "small.cfg").string(), "--out", dir.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "grid_swucb_tau.csv"));
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["grids"].size(), 1u);
  const double best = j["grids"][0]["best_value"].get<double>();
  EXPECT_TRUE(best == 50.0 || best == 100.0);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("env");
  auto text = small_config();
  write_text(dir / "small.cfg", text);
  const auto target = dir / "from_env";
  ::setenv(cli::kOutDirEnv, target.string().c_str(), 1);
  const auto r = invoke({"run", "--config", (dir / "small.cfg").string()});
  ::unsetenv(cli::kOutDirEnv);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(fs::exists(target / "summary.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, cli::kUsage);
  const auto unknown = invoke({"frobnicate"});
  EXPECT_EQ(unknown.code, cli::kUsage);
  EXPECT_NE(unknown.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
  EXPECT_EQ(invoke({"run"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"theory", "det", "--family", "nope", "--theta", "0.1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"--help"}).code, cli::kOk);

  const auto dir = scratch("codes");
  write_text(dir / "bad.cfg", "[experiment]\nhorizon = 0\n");
  const auto bad = invoke({"run", "--config", (dir / "bad.cfg").string(), "--out", dir.string()});
  EXPECT_EQ(bad.code, cli::kUsage);
  EXPECT_NE(bad.err.find("missing profile section"), std::string::npos);

  EXPECT_EQ(invoke({"run", "--config", (dir / "absent.cfg").string()}).code, cli::kRuntime);
  EXPECT_EQ(invoke({"compare", "--samples", (dir / "absent.csv").string()}).code, cli::kRuntime);
}
