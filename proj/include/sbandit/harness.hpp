#pragma once

// Monte-Carlo experiment engine: episodes, replicated experiments, parameter
// sweeps and the whitespace-separated result tables.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "sbandit/bandit.hpp"
#include "sbandit/environment.hpp"
#include "sbandit/policies.hpp"

namespace sbandit {

/// 1 = c_0 < c_1 < ... < n with c_{k+1} = max(c_k + 1, floor(ratio c_k)), ending at n.
inline std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t n, double ratio = 1.25) {
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(ratio > 1.0)) throw std::invalid_argument("checkpoint ratio must exceed 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 1; c < n;) {
    out.push_back(c);
    c = std::max(c + 1, static_cast<std::uint64_t>(std::floor(static_cast<double>(c) * ratio)));
  }
  out.push_back(n);
  return out;
}

/// `count` evenly spaced checkpoints k n / count, k = 1..count.
inline std::vector<std::uint64_t> linear_checkpoints(std::uint64_t n, std::size_t count) {
  if (n < 1 || count < 1) throw std::invalid_argument("linear checkpoints need n >= 1 and count >= 1");
  std::vector<std::uint64_t> out;
  for (std::size_t k = 1; k <= count; ++k) {
    const std::uint64_t c = n * k / count;
    if (c >= 1 && (out.empty() || c > out.back())) out.push_back(c);
  }
  return out;
}

struct ExperimentConfig {
  std::string problem;
  std::vector<PolicySpec> policies{policy_spec("ucbs"), policy_spec("ucb")};
  std::vector<Theta> thetas{0.0};
  std::uint64_t horizon = 1000;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;          // replication r uses stream first_stream + r
  std::vector<std::uint64_t> checkpoints;  // empty: geometric_checkpoints(horizon)
  std::size_t workers = 1;

  std::vector<std::uint64_t> effective_checkpoints() const {
    return checkpoints.empty() ? geometric_checkpoints(horizon) : checkpoints;
  }

  void validate() const {
    if (replications < 1) throw std::invalid_argument("replication count must be >= 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (thetas.empty()) throw std::invalid_argument("at least one parameter value is required");
    if (policies.empty()) throw std::invalid_argument("at least one policy is required");
    const auto cps = effective_checkpoints();
    if (cps.empty() || cps.back() != horizon) throw std::invalid_argument("the last checkpoint must equal the horizon");
    for (std::size_t i = 0; i < cps.size(); ++i) {
      if (cps[i] < 1 || (i > 0 && cps[i] <= cps[i - 1])) {
        throw std::invalid_argument("checkpoints must be strictly increasing and >= 1");
      }
    }
  }
};

struct EpisodeResult {
  std::vector<double> regret;            // cumulative pseudo-regret at each checkpoint
  std::vector<std::size_t> final_pulls;  // T_i(n)
};

/// Called before each selection with the statistics of the first t-1 steps.
using StepObserver = std::function<void(const ArmStatistics&, std::size_t t)>;

/// Plays t = 1..n. Regret at a checkpoint is sum_i gap_i T_i(t), computed
/// from the integer pull counts.
inline EpisodeResult run_episode(Environment& env, Policy& policy, std::uint64_t horizon,
                                 const std::vector<std::uint64_t>& checkpoints, const StepObserver& observer = {}) {
  const std::size_t K = env.bandit().arms();
  const std::vector<double>& gaps = env.gaps().gaps;
  ArmStatistics stats(K);
  EpisodeResult out;
  out.regret.reserve(checkpoints.size());
  std::size_t next = 0;
  const auto regret_now = [&] {
    double r = 0.0;
    for (std::size_t i = 0; i < K; ++i) r += gaps[i] * static_cast<double>(stats.pulls(i));
    return r;
  };
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    if (observer) observer(stats, t);
    const std::size_t arm = policy.select(stats, t);
    const double x = sample_reward(env, arm, stats);
    policy.observe(arm, x);
    while (next < checkpoints.size() && checkpoints[next] == t) {
      out.regret.push_back(regret_now());
      ++next;
    }
  }
  out.final_pulls = stats.all_pulls();
  return out;
}

/// Mean regret curve of one policy at one parameter value.
struct RegretCurve {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean;
  std::vector<double> samples;  // replication-major: samples[r * checkpoints.size() + c]
  std::size_t replications = 0;

  double sample(std::size_t r, std::size_t c) const { return samples[r * checkpoints.size() + c]; }
  double terminal(std::size_t r) const { return sample(r, checkpoints.size() - 1); }
  double terminal_mean() const { return mean.back(); }

  /// Standard error of the replication mean at checkpoint c.
  double standard_error(std::size_t c) const {
    if (replications < 2) return 0.0;
    double var = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
      const double d = sample(r, c) - mean[c];
      var += d * d;
    }
    var /= static_cast<double>(replications - 1);
    return std::sqrt(var / static_cast<double>(replications));
  }

  /// Index of checkpoint t; throws if t is not a checkpoint.
  std::size_t index_of(std::uint64_t t) const {
    const auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), t);
    if (it == checkpoints.end() || *it != t) throw std::out_of_range("not a checkpoint: " + std::to_string(t));
    return static_cast<std::size_t>(it - checkpoints.begin());
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::vector<RegretCurve>> curves;  // [theta][policy]
};

/// Runs `count` independent tasks on up to `workers` threads. The first
/// exception thrown by a task is rethrown after all workers stop.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Replication r of every (theta, policy) cell uses the same reward stream, so all
/// policies and parameter values see common random numbers. Averages are
/// reduced in replication order, independent of the worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& config, std::shared_ptr<const StructuredBandit> bandit) {
  config.validate();
  if (!bandit) throw std::invalid_argument("experiment needs a bandit");
  for (const auto& spec : config.policies) make_policy(spec, bandit);  // surface mismatches before running
  for (const auto& theta : config.thetas) {
    if (!bandit->space().contains(theta)) throw std::out_of_range("theta* is not a member of the space");
  }

  const auto checkpoints = config.effective_checkpoints();
  const std::size_t C = checkpoints.size();
  const std::size_t P = config.policies.size();
  const std::size_t R = config.replications;
  const std::size_t T = config.thetas.size();

  ExperimentResult result;
  result.config = config;
  result.curves.assign(T, std::vector<RegretCurve>(P));
  for (auto& row : result.curves) {
    for (auto& curve : row) {
      curve.checkpoints = checkpoints;
      curve.replications = R;
      curve.samples.assign(R * C, 0.0);
      curve.mean.assign(C, 0.0);
    }
  }

  parallel_for(T * R, config.workers, [&](std::size_t task) {
    const std::size_t th = task / R;
    const std::size_t r = task % R;
    for (std::size_t p = 0; p < P; ++p) {
      Environment env(bandit, config.thetas[th], config.seed, config.first_stream + r);
      auto policy = make_policy(config.policies[p], bandit);
      const EpisodeResult ep = run_episode(env, *policy, config.horizon, checkpoints);
      std::copy(ep.regret.begin(), ep.regret.end(), result.curves[th][p].samples.begin() + static_cast<long>(r * C));
    }
  });

  for (auto& row : result.curves) {
    for (auto& curve : row) {
      for (std::size_t c = 0; c < C; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < R; ++r) sum += curve.sample(r, c);
        curve.mean[c] = sum / static_cast<double>(R);
      }
    }
  }
  return result;
}

/// Sweep parameters ((steps-1-i) min + i max)/(steps-1), i = 0..steps-1.
inline std::vector<Theta> sweep_thetas(double theta_min, double theta_max, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("sweep needs at least one step");
  if (steps > 1 && !(theta_min < theta_max)) throw std::invalid_argument("sweep needs theta-min < theta-max");
  std::vector<Theta> out;
  for (double x : uniform_grid(theta_min, theta_max, steps)) out.emplace_back(x);
  return out;
}

// -- Tables ---------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;   // lines without the leading '#'
  std::vector<std::string> columns;  // column names
  std::vector<std::vector<double>> rows;
};

/// Shortest round-trippable text with 6 significant digits, locale-independent.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 6);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return {buf, res.ptr};
}

inline double parse_number(std::string_view token) {
  double x = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("not a number: '" + std::string(token) + "'");
  }
  return x;
}

inline std::vector<std::string> config_header(const ExperimentConfig& c) {
  std::vector<std::string> h;
  h.push_back("problem " + c.problem);
  std::string pol = "policies";
  for (const auto& p : c.policies) pol += " " + std::string(policy_name(p.kind)) + ":alpha=" + format_number(p.alpha);
  h.push_back(pol);
  h.push_back("horizon " + std::to_string(c.horizon));
  h.push_back("replications " + std::to_string(c.replications));
  h.push_back("seed " + std::to_string(c.seed));
  return h;
}

/// Terminal mean regret per policy against theta.
inline Table sweep_table(const ExperimentResult& result) {
  Table t;
  t.header = config_header(result.config);
  t.columns.push_back("theta");
  for (const auto& p : result.config.policies) t.columns.emplace_back(policy_name(p.kind));
  for (std::size_t i = 0; i < result.curves.size(); ++i) {
    std::vector<double> row{scalar_of(result.config.thetas[i])};
    for (const auto& curve : result.curves[i]) row.push_back(curve.terminal_mean());
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Mean regret per policy against the checkpoints, for parameter `theta_index`.
inline Table horizon_table(const ExperimentResult& result, std::size_t theta_index = 0) {
  Table t;
  t.header = config_header(result.config);
  t.header.push_back("theta " + format_number(scalar_of(result.config.thetas.at(theta_index))));
  t.columns.push_back("n");
  for (const auto& p : result.config.policies) t.columns.emplace_back(policy_name(p.kind));
  const auto& row0 = result.curves.at(theta_index);
  for (std::size_t c = 0; c < row0.front().checkpoints.size(); ++c) {
    std::vector<double> row{static_cast<double>(row0.front().checkpoints[c])};
    for (const auto& curve : row0) row.push_back(curve.mean[c]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_table(const Table& table, std::ostream& os) {
  if (table.rows.empty()) throw std::invalid_argument("refusing to write an empty table");
  for (const auto& line : table.header) os << "# " << line << '\n';
  if (!table.columns.empty()) {
    os << "# columns:";
    for (const auto& c : table.columns) os << ' ' << c;
    os << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << format_number(row[i]);
    os << '\n';
  }
  if (!os) throw std::runtime_error("failed to write table");
}

inline void write_table(const Table& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_table(table, os);
  os.close();
  if (!os) throw std::runtime_error("failed to write '" + path + "'");
}

inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      if (body.rfind("columns:", 0) == 0) {
        std::istringstream cs(body.substr(8));
        for (std::string c; cs >> c;) t.columns.push_back(c);
      } else {
        t.header.push_back(std::move(body));
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> row;
    for (std::string tok; ls >> tok;) row.push_back(parse_number(tok));
    if (!t.rows.empty() && row.size() != t.rows.front().size()) throw std::invalid_argument("ragged table row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table read_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_table(is);
}

// -- Concentration check -----------------------------------------------------------

/// Fraction of `trials` sample means of n draws from N(0, sigma2) that miss
/// zero by at least epsilon. Trial k uses stream k of `seed`.
inline double concentration_frequency(std::uint64_t n, double epsilon, double sigma2, std::size_t trials,
                                      std::uint64_t seed) {
  if (n < 1 || trials < 1) throw std::invalid_argument("concentration check needs n >= 1 and trials >= 1");
  const double sd = std::sqrt(sigma2);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    RandomStream s(seed, k);
    double sum = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) sum += s.next_normal(0.0, sd);
    if (std::fabs(sum / static_cast<double>(n)) >= epsilon) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace sbandit
