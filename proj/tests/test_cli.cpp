#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sbandit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = sbandit::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST(Cli, Omega) {
  EXPECT_EQ(invoke({"omega", "--x", "10"}).out, "36\n");
  EXPECT_EQ(invoke({"omega", "--x", "100"}).out, "648\n");
  EXPECT_EQ(invoke({"omega", "--x", "20", "--two"}).out, "23\n");
  EXPECT_EQ(invoke({"omega", "--x", "-1"}).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"run", "--problem", "example-a"}).code, 1);
  EXPECT_EQ(invoke({"run", "--problem", "nope", "--theta", "0"}).code, 1);
  EXPECT_EQ(invoke({"run", "--problem", "example-a", "--theta", "5"}).code, 2);
  EXPECT_EQ(invoke({"run", "--theta", "0"}).code, 1);
}

TEST(Cli, RunAtZeroGap) {
  const auto r = invoke({"run", "--problem", "example-a", "--theta", "0", "--horizon", "500", "--reps", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines.back(), "500 0");
  EXPECT_NE(r.out.find("# terminal mean regret 0 standard error 0"), std::string::npos);
}

TEST(Cli, PhasedRejectsAlpha) {
  const auto r = invoke({"run", "--problem", "ambiguous-a", "--theta", "0", "--algo", "phased", "--alpha", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("phased"), std::string::npos);
  EXPECT_EQ(invoke({"sweep", "--problem", "ambiguous-a", "--algos", "phased:2"}).code, 1);
}

TEST(Cli, Sweep) {
  const auto r = invoke({"sweep", "--problem", "example-c", "--theta-min", "-0.1", "--theta-max", "0.1",
                         "--theta-steps", "3", "--horizon", "200", "--algos", "ucbs:4,ucb"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 3U);
  EXPECT_EQ(lines[0].rfind("-0.1 ", 0), 0U);
  EXPECT_EQ(lines[1].rfind("0 ", 0), 0U);
  EXPECT_NE(r.out.find("# columns: theta ucbs ucb"), std::string::npos);
}

TEST(Cli, Classify) {
  const auto r = invoke({"classify", "--problem", "example-b", "--grid", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 5U);
  EXPECT_EQ(lines[0].rfind("-1 hard", 0), 0U);
  EXPECT_EQ(lines[2], "0 degenerate -");
  EXPECT_EQ(lines[4], "1 easy epsilon=1");
  EXPECT_EQ(invoke({"classify", "--problem", "example-f"}).code, 1);
}

TEST(Cli, Bounds) {
  const auto t1 = invoke({"bounds", "--problem", "example-a", "--theorem", "1", "--theta", "0.2", "--horizon", "10000"});
  ASSERT_EQ(t1.code, 0) << t1.err;
  EXPECT_GT(sbandit::parse_number(data_lines(t1.out).at(0)), 0.0);
  const auto t2 = invoke({"bounds", "--problem", "example-a", "--theorem", "2", "--theta", "0.04"});
  ASSERT_EQ(t2.code, 0) << t2.err;
  EXPECT_GT(sbandit::parse_number(data_lines(t2.out).at(0)), 0.0);
  const auto t3 = invoke({"bounds", "--theorem", "3", "--theta", "0.1"});
  ASSERT_EQ(t3.code, 0) << t3.err;
  EXPECT_EQ(t3.out, sbandit::format_number(sbandit::symmetric_lower_bound(0.1)) + "\n");
  EXPECT_EQ(invoke({"bounds", "--problem", "example-a", "--theorem", "2", "--theta", "0"}).code, 2);
  EXPECT_EQ(invoke({"bounds", "--theorem", "7"}).code, 1);
}

TEST(Cli, ConcentrationTest) {
  const auto r = invoke({"concentration-test", "--trials", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("empirical ", 0), 0U);
  EXPECT_NE(r.out.find(" bound 0.0366313"), std::string::npos);
}

TEST(Cli, HorizonPresetReachesHorizon) {
  const auto r = invoke({"reproduce", "fig-a-horizon", "--reps", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 100U);
  EXPECT_EQ(lines.front().rfind("1000 ", 0), 0U);
  EXPECT_EQ(lines.back().rfind("100000 ", 0), 0U);
}
