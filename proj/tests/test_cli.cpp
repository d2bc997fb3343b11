#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/suites.hpp"
#include "wsn/cli.hpp"

using namespace wsn;

namespace {

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = fs::temp_directory_path() / (std::string("wsn_cli_") + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wsn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

}  // namespace

TEST(Cli, RejectsBadArguments) {
  EXPECT_EQ(cli({"--bogus"}).code, 1);
  EXPECT_EQ(cli({"--mode", "dance"}).code, 1);
  const auto eps = cli({"--instance", "x", "--epsilon", "1.5"});
  EXPECT_EQ(eps.code, 1);
  EXPECT_NE(eps.err.find("epsilon"), std::string::npos) << eps.err;
  EXPECT_EQ(cli({"--mode", "solve"}).code, 1);
  EXPECT_EQ(cli({"--mode", "sweep", "--instance", "x"}).code, 1);
  EXPECT_EQ(cli({"--mode", "solve", "--instance", "x", "--budgets", "1,2"}).code, 1);
  const auto missing = cli({"--instance", (scratch_dir() / "nothing").string()});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error: ", 0), 0u) << missing.err;
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, SolveMatchesOracleAndIsRepeatable) {
  const auto dir = scratch_dir();
  save_instance(suites::small(4), dir / "inst");
  const auto inst = (dir / "inst").string();
  ASSERT_EQ(cli({"--mode", "oracle", "--instance", inst, "--out", (dir / "o").string()}).code, 0);
  ASSERT_EQ(cli({"--instance", inst, "--epsilon", "1e-6", "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(cli({"--instance", inst, "--epsilon", "1e-6", "--out", (dir / "b").string()}).code, 0);
  const double opt = summary(dir / "o")["objective"];
  const double got = summary(dir / "a")["objective"];
  EXPECT_NEAR(got, opt, 1e-4 * std::max(1.0, std::abs(opt)));
  EXPECT_EQ(summary(dir / "a")["converged"], true);
  EXPECT_EQ(slurp(dir / "a" / "trace_canonical.txt"), slurp(dir / "b" / "trace_canonical.txt"));
  EXPECT_EQ(slurp(dir / "a" / "investments.csv"), slurp(dir / "b" / "investments.csv"));
  for (const char* f : {"trace.csv", "flows.csv", "service.csv"}) EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
}

TEST(Cli, IterationLimitExitsTwo) {
  const auto dir = scratch_dir();
  save_instance(suites::medium(0), dir / "inst");
  const auto r = cli({"--instance", (dir / "inst").string(), "--epsilon", "1e-9", "--max-iters", "1", "--accel", "none",
                      "--out", (dir / "a").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(summary(dir / "a")["termination"], "iterations");
}

TEST(Cli, SweepAndStochasticModes) {
  const auto dir = scratch_dir();
  auto one = suites::small(0);
  save_instance(one, dir / "inst");
  const auto inst = (dir / "inst").string();
  ASSERT_EQ(cli({"--mode", "sweep", "--instance", inst, "--budgets", "0,50000,100000", "--out", (dir / "s").string()}).code, 0);
  const auto pts = summary(dir / "s")["points"];
  ASSERT_EQ(pts.size(), 3u);
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_LE(pts[k]["total_cost"].get<double>(), pts[k - 1]["total_cost"].get<double>() * (1 + 1e-9));
  ASSERT_EQ(one.sets.num_scenarios(), 1);
  ASSERT_EQ(cli({"--mode", "vss", "--instance", inst, "--out", (dir / "v").string()}).code, 0);
  EXPECT_EQ(summary(dir / "v")["vss"], 0.0);
  ASSERT_EQ(cli({"--mode", "evpi", "--instance", inst, "--out", (dir / "e").string()}).code, 0);
  EXPECT_EQ(summary(dir / "e")["evpi"], 0.0);
  EXPECT_TRUE(fs::exists(dir / "e" / "stochastic.csv"));
}

TEST(Cli, GenerateWritesLoadableInstance) {
  const auto dir = scratch_dir();
  ASSERT_EQ(cli({"--mode", "generate", "--ports", "3", "--counties", "5", "--commodities", "2", "--periods", "2",
                 "--scenarios", "2", "--seed", "9", "--out", (dir / "g").string()}).code, 0);
  const auto inst = load_instance(dir / "g");
  EXPECT_EQ(inst.sets.num_ports(), 3);
  EXPECT_EQ(inst.sets.num_scenarios(), 2);
  ASSERT_EQ(cli({"--mode", "generate", "--ports", "3", "--counties", "5", "--commodities", "2", "--periods", "2",
                 "--scenarios", "2", "--seed", "9", "--out", (dir / "h").string()}).code, 0);
  EXPECT_EQ(load_instance(dir / "h"), inst);
}
