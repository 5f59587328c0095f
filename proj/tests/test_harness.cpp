#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include "sbandit/catalog.hpp"
#include "sbandit/harness.hpp"

using namespace sbandit;

namespace {

std::shared_ptr<const StructuredBandit> builtin(const char* name) {
  return std::make_shared<const StructuredBandit>(make_builtin(name));
}

std::string to_text(const Table& t) {
  std::ostringstream os;
  write_table(t, os);
  return os.str();
}

}  // namespace

TEST(Checkpoints, Geometric) {
  const auto c = geometric_checkpoints(1000);
  EXPECT_EQ(c.front(), 1U);
  EXPECT_EQ(c.back(), 1000U);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1], c[i]);
  EXPECT_EQ(geometric_checkpoints(1), std::vector<std::uint64_t>{1});
  EXPECT_THROW(geometric_checkpoints(0), std::invalid_argument);
}

TEST(Checkpoints, Linear) {
  const auto c = linear_checkpoints(100000, 100);
  ASSERT_EQ(c.size(), 100U);
  EXPECT_EQ(c.front(), 1000U);
  EXPECT_EQ(c.back(), 100000U);
}

TEST(RunEpisode, ZeroGapHasZeroRegret) {
  auto a = builtin("example-a");
  for (const char* id : {"ucb", "ucbs"}) {
    Environment env(a, 0.0, 1, 0);
    auto p = make_policy(policy_spec(id), a);
    const auto ep = run_episode(env, *p, 2000, geometric_checkpoints(2000));
    for (double r : ep.regret) EXPECT_EQ(r, 0.0);
  }
}

TEST(RunEpisode, PseudoRegretIdentity) {
  auto a = builtin("example-a");
  Environment env(a, 0.04, 3, 0);
  auto p = make_policy(policy_spec("ucbs"), a);
  const auto ep = run_episode(env, *p, 50000, {50000});
  EXPECT_EQ(ep.final_pulls[0] + ep.final_pulls[1], 50000U);
  EXPECT_GT(ep.final_pulls[1], 0U);
  EXPECT_EQ(ep.regret.back(), env.gaps().gaps[1] * static_cast<double>(ep.final_pulls[1]));
  EXPECT_NEAR(ep.regret.back(), 0.08 * static_cast<double>(ep.final_pulls[1]), 1e-9);
}

TEST(RunEpisode, ObserverSeesStatisticsBeforeEachStep) {
  auto a = builtin("example-a");
  Environment env(a, 0.3, 3, 0);
  auto p = make_policy(policy_spec("ucb"), a);
  std::size_t calls = 0;
  run_episode(env, *p, 100, {100}, [&](const ArmStatistics& s, std::size_t t) {
    EXPECT_EQ(s.steps(), t - 1);
    ++calls;
  });
  EXPECT_EQ(calls, 100U);
}

TEST(RunExperiment, Deterministic) {
  auto a = builtin("example-c");
  ExperimentConfig cfg;
  cfg.thetas = {0.1, -0.1};
  cfg.horizon = 3000;
  cfg.replications = 6;
  cfg.seed = 99;
  const auto r1 = run_experiment(cfg, a);
  const auto r2 = run_experiment(cfg, a);
  EXPECT_EQ(r1.curves[0][0].samples, r2.curves[0][0].samples);
  EXPECT_EQ(r1.curves[1][1].samples, r2.curves[1][1].samples);
}

TEST(RunExperiment, SingleReplicationEqualsEpisode) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.policies = {policy_spec("ucbs")};
  cfg.thetas = {0.2};
  cfg.horizon = 5000;
  cfg.seed = 4;
  const auto res = run_experiment(cfg, a);
  Environment env(a, 0.2, 4, 0);
  auto p = make_policy(policy_spec("ucbs"), a);
  const auto ep = run_episode(env, *p, 5000, cfg.effective_checkpoints());
  EXPECT_EQ(res.curves[0][0].mean, ep.regret);
}

TEST(RunExperiment, PoolingDisjointStreamRanges) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.thetas = {0.1};
  cfg.horizon = 2000;
  cfg.seed = 8;
  cfg.replications = 3;
  const auto first = run_experiment(cfg, a);
  cfg.first_stream = 3;
  const auto second = run_experiment(cfg, a);
  cfg.first_stream = 0;
  cfg.replications = 6;
  const auto both = run_experiment(cfg, a);
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& f = first.curves[0][p];
    const auto& s = second.curves[0][p];
    const auto& b = both.curves[0][p];
    for (std::size_t c = 0; c < b.checkpoints.size(); ++c) {
      EXPECT_NEAR(b.mean[c], (f.mean[c] + s.mean[c]) / 2, 1e-9 * std::max(1.0, b.mean[c]));
    }
  }
}

TEST(RunExperiment, WorkerCountDoesNotChangeOutput) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.problem = "example-a";
  cfg.thetas = sweep_thetas(-0.2, 0.2, 5);
  cfg.horizon = 2000;
  cfg.replications = 7;
  cfg.seed = 1;
  cfg.checkpoints = {2000};
  cfg.workers = 1;
  const std::string one = to_text(sweep_table(run_experiment(cfg, a)));
  cfg.workers = 4;
  const std::string four = to_text(sweep_table(run_experiment(cfg, a)));
  EXPECT_EQ(one, four);
}

TEST(RunExperiment, CurvesAreNondecreasing) {
  auto a = builtin("example-b");
  ExperimentConfig cfg;
  cfg.thetas = {-0.2, 0.2};
  cfg.horizon = 3000;
  cfg.replications = 5;
  const auto res = run_experiment(cfg, a);
  for (const auto& row : res.curves) {
    for (const auto& curve : row) {
      for (std::size_t r = 0; r < curve.replications; ++r) {
        for (std::size_t c = 1; c < curve.checkpoints.size(); ++c) EXPECT_LE(curve.sample(r, c - 1), curve.sample(r, c));
      }
      for (double m : curve.mean) EXPECT_GE(m, 0.0);
    }
  }
}

TEST(RunExperiment, Validation) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.replications = 0;
  EXPECT_THROW(run_experiment(cfg, a), std::invalid_argument);
  cfg.replications = 1;
  cfg.checkpoints = {10, 20};
  EXPECT_THROW(run_experiment(cfg, a), std::invalid_argument);
  cfg.checkpoints = {};
  cfg.thetas = {2.0};
  EXPECT_THROW(run_experiment(cfg, a), std::out_of_range);
  cfg.thetas = {1.5};
  auto f = builtin("example-f");
  cfg.policies = {policy_spec("phased")};
  EXPECT_THROW(run_experiment(cfg, f), std::invalid_argument);
}

TEST(RunExperiment, StructuredPolicyBeatsUcbAwayFromZero) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.thetas = {-0.2, -0.1, -0.04, 0.04, 0.1, 0.2};
  cfg.horizon = 50000;
  cfg.replications = 20;
  cfg.seed = 2;
  cfg.checkpoints = {50000};
  cfg.workers = 2;
  const auto res = run_experiment(cfg, a);
  for (const auto& row : res.curves) EXPECT_LT(row[0].terminal_mean(), row[1].terminal_mean());
}

TEST(Table, Format) {
  Table t;
  t.header = {"problem x"};
  t.rows = {{0.0, 0.0, -0.0}};
  EXPECT_EQ(to_text(t), "# problem x\n0 0 0\n");
  EXPECT_EQ(format_number(123456789.0), "1.23457e+08");
  EXPECT_EQ(format_number(0.04), "0.04");
  EXPECT_EQ(format_number(-0.2), "-0.2");
  EXPECT_EQ(format_number(50000), "50000");
  EXPECT_THROW(to_text(Table{}), std::invalid_argument);
}

TEST(Table, SweepRowsAndRoundTrip) {
  auto a = builtin("example-a");
  ExperimentConfig cfg;
  cfg.problem = "example-a";
  cfg.thetas = sweep_thetas(-0.2, 0.2, 41);
  cfg.horizon = 500;
  cfg.replications = 2;
  cfg.checkpoints = {500};
  const Table t = sweep_table(run_experiment(cfg, a));
  ASSERT_EQ(t.rows.size(), 41U);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i - 1][0], t.rows[i][0]);
  EXPECT_EQ(t.rows[20][0], 0.0);

  std::istringstream is(to_text(t));
  const Table back = read_table(is);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.columns, (std::vector<std::string>{"theta", "ucbs", "ucb"}));
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      EXPECT_NEAR(back.rows[i][j], t.rows[i][j], 5e-6 * std::fabs(t.rows[i][j]) + 1e-300);
      EXPECT_EQ(format_number(back.rows[i][j]), format_number(t.rows[i][j]));
    }
  }
}

TEST(Table, FileErrors) {
  Table t;
  t.rows = {{1, 2}};
  EXPECT_THROW(write_table(t, std::string("/nonexistent-dir/x/table.txt")), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "sbandit_table_test.txt";
  write_table(t, path.string());
  EXPECT_EQ(read_table(path.string()).rows, t.rows);
  std::filesystem::remove(path);
  std::istringstream bad("1 2\n3\n");
  EXPECT_THROW(read_table(bad), std::invalid_argument);
}

TEST(Concentration, FrequencyBelowBound) {
  const double f = concentration_frequency(8, 1.0, 1.0, 20000, 3);
  const double b = 2 * std::exp(-4.0);
  EXPECT_LE(f, b + 3 * std::sqrt(b * (1 - b) / 20000));
  EXPECT_GT(f, 0.0);
}
