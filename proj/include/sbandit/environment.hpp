#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbandit/bandit.hpp"
#include "sbandit/rng.hpp"

namespace sbandit {

/// Per-arm pull counts and reward sums; the sufficient statistic of every policy.
class ArmStatistics {
 public:
  explicit ArmStatistics(std::size_t arms) : pulls_(arms, 0), sums_(arms, 0.0) {
    if (arms == 0) throw std::invalid_argument("statistics need at least one arm");
  }

  /// Statistics with the given counts and empirical means (for constructing scenarios).
  static ArmStatistics from_summary(const std::vector<std::size_t>& pulls, const std::vector<double>& means) {
    if (pulls.size() != means.size()) throw std::invalid_argument("pulls and means differ in length");
    ArmStatistics s(pulls.size());
    for (std::size_t i = 0; i < pulls.size(); ++i) {
      s.pulls_[i] = pulls[i];
      s.sums_[i] = means[i] * static_cast<double>(pulls[i]);
      s.steps_ += pulls[i];
    }
    return s;
  }

  void record(std::size_t arm, double reward) {
    check(arm);
    ++pulls_[arm];
    sums_[arm] += reward;
    ++steps_;
  }

  std::size_t arms() const noexcept { return pulls_.size(); }
  /// Number of recorded rewards, i.e. the index of the last completed step.
  std::size_t steps() const noexcept { return steps_; }
  std::size_t pulls(std::size_t arm) const { return pulls_.at(arm); }
  double sum(std::size_t arm) const { return sums_.at(arm); }
  /// Empirical mean; 0 for an arm that was never pulled.
  double mean(std::size_t arm) const {
    check(arm);
    return pulls_[arm] == 0 ? 0.0 : sums_[arm] / static_cast<double>(pulls_[arm]);
  }
  const std::vector<std::size_t>& all_pulls() const noexcept { return pulls_; }

 private:
  void check(std::size_t arm) const {
    if (arm >= pulls_.size()) throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
  }

  std::vector<std::size_t> pulls_;
  std::vector<double> sums_;
  std::size_t steps_ = 0;
};

/// A bandit instance with a fixed true parameter and its own reward stream.
class Environment {
 public:
  Environment(std::shared_ptr<const StructuredBandit> bandit, Theta theta_star, std::uint64_t key)
      : bandit_(std::move(bandit)), theta_star_(std::move(theta_star)), stream_(key) {
    if (!bandit_) throw std::invalid_argument("environment needs a bandit");
    if (!bandit_->space().contains(theta_star_)) throw std::out_of_range("theta* is not a member of the space");
    true_means_ = bandit_->means_at(theta_star_);
    gaps_ = gap_profile_of(true_means_);
    stddev_ = std::sqrt(bandit_->sigma2());
  }

  /// Environment for replication `stream` of an experiment seeded with `base_seed`.
  Environment(std::shared_ptr<const StructuredBandit> bandit, Theta theta_star, std::uint64_t base_seed,
              std::uint64_t stream)
      : Environment(std::move(bandit), std::move(theta_star), derive_stream_key(base_seed, stream)) {}

  const StructuredBandit& bandit() const noexcept { return *bandit_; }
  std::shared_ptr<const StructuredBandit> bandit_ptr() const noexcept { return bandit_; }
  const Theta& theta_star() const noexcept { return theta_star_; }
  const std::vector<double>& true_means() const noexcept { return true_means_; }
  const GapProfile& gaps() const noexcept { return gaps_; }

  /// Draws a reward of `arm` without recording it.
  double draw(std::size_t arm) {
    if (arm >= true_means_.size()) throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
    return stream_.next_normal(true_means_[arm], stddev_);
  }

 private:
  std::shared_ptr<const StructuredBandit> bandit_;
  Theta theta_star_;
  RandomStream stream_;
  std::vector<double> true_means_;
  GapProfile gaps_;
  double stddev_ = 1.0;
};

/// Draws X ~ N(mu_arm(theta*), sigma2) and appends it to `stats`.
inline double sample_reward(Environment& env, std::size_t arm, ArmStatistics& stats) {
  const double x = env.draw(arm);
  stats.record(arm, x);
  return x;
}

}  // namespace sbandit
