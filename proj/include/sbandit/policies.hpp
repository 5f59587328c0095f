#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "sbandit/bandit.hpp"
#include "sbandit/confidence.hpp"
#include "sbandit/environment.hpp"

namespace sbandit {

// All selection rules break ties toward the lowest arm index.

/// Classic UCB. Unpulled arms are played first, lowest index first.
inline std::size_t ucb_select(const ArmStatistics& stats, std::size_t t, double alpha, double sigma2) {
  for (std::size_t i = 0; i < stats.arms(); ++i) {
    if (stats.pulls(i) == 0) return i;
  }
  std::size_t best = 0;
  double best_index = -kInf;
  for (std::size_t i = 0; i < stats.arms(); ++i) {
    const double index = stats.mean(i) + confidence_radius(t, stats.pulls(i), alpha, sigma2);
    if (index > best_index) {
      best = i;
      best_index = index;
    }
  }
  return best;
}

/// Arm with the fewest pulls; the fallback when the plausible set is empty.
inline std::size_t least_pulled(const ArmStatistics& stats) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < stats.arms(); ++i) {
    if (stats.pulls(i) < stats.pulls(best)) best = i;
  }
  return best;
}

/// Optimistic arm argmax_i sup_{theta in set} mu_i(theta) for a non-empty set.
inline std::size_t optimistic_arm(const ConfidenceSet& set) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < set.sup.size(); ++i) {
    if (set.sup[i] > set.sup[best]) best = i;
  }
  return best;
}

/// UCB-S selection given an already computed plausible set.
inline std::size_t ucbs_select(const ConfidenceSet& set, const ArmStatistics& stats) {
  return set.empty ? least_pulled(stats) : optimistic_arm(set);
}

/// UCB-S: the optimistic arm over the plausible parameters of step t.
inline std::size_t ucbs_select(const StructuredBandit& bandit, const ArmStatistics& stats, std::size_t t, double alpha,
                               ConfidenceMode mode = ConfidenceMode::kExact) {
  return ucbs_select(plausible_parameters(bandit, stats, t, alpha, mode), stats);
}

/// Commitment of the risk-averse variant; nullopt means no committed arm.
struct RiskAverseState {
  std::optional<std::size_t> committed;
};

/// Exploration bonus schedule beta_t = log log max(t, 3).
inline double risk_averse_beta(std::size_t t) {
  const double tt = std::max<double>(static_cast<double>(t), 3.0);
  return std::max(0.0, std::log(std::log(tt)));
}

/// Risk-averse UCB-S. When uncommitted and some plausible parameter is marked
/// ambiguous, commits to the optimal arm of the first such parameter; the
/// committed arm earns the bonus sqrt(beta_t log t / T_k). The commitment is
/// kept while it is followed and dropped otherwise.
inline std::pair<std::size_t, RiskAverseState> ucbs_ra_select(const StructuredBandit& bandit, const ConfidenceSet& set,
                                                              const ArmStatistics& stats, RiskAverseState state,
                                                              std::size_t t) {
  if (!bandit.space().has_ambiguous_marks()) {
    throw std::invalid_argument("risk-averse UCB-S needs ambiguous-region marks on the parameter space");
  }
  if (!state.committed) {
    if (const auto theta = set.first_marked_point(bandit.space())) {
      state.committed = bandit.gap_profile(*theta).optimal_arm;
    }
  }
  std::size_t chosen;
  if (set.empty) {
    chosen = least_pulled(stats);
  } else {
    chosen = 0;
    double best = -kInf;
    const double beta = risk_averse_beta(t);
    for (std::size_t k = 0; k < set.sup.size(); ++k) {
      double index = set.sup[k];
      if (state.committed == k) {
        index += stats.pulls(k) == 0
                     ? kInf
                     : std::sqrt(beta * std::log(static_cast<double>(t)) / static_cast<double>(stats.pulls(k)));
      }
      if (index > best) {
        best = index;
        chosen = k;
      }
    }
  }
  if (state.committed != chosen) state.committed.reset();
  return {chosen, state};
}

inline std::pair<std::size_t, RiskAverseState> ucbs_ra_select(const StructuredBandit& bandit,
                                                              const ArmStatistics& stats, RiskAverseState state,
                                                              std::size_t t, double alpha,
                                                              ConfidenceMode mode = ConfidenceMode::kExact) {
  return ucbs_ra_select(bandit, plausible_parameters(bandit, stats, t, alpha, mode), stats, std::move(state), t);
}

/// State machine of the phase-based two-arm algorithm. Phase l opens with
/// 2^l forced pulls of arm 0 and l^2 of arm 1, then extends one arm while its
/// in-phase mean stays above a threshold. Arms are 0-based here: arm 0 is the
/// first arm of the listing.
struct PhasedState {
  enum class Mode { kForcedFirst, kForcedSecond, kRunFirst, kRunSecond };

  static constexpr double kAlpha = 5.0;

  std::size_t phase = 2;
  Mode mode = Mode::kForcedFirst;
  std::size_t count[2] = {0, 0};
  double sum[2] = {0.0, 0.0};
  std::optional<std::size_t> last_arm;

  std::size_t forced_first() const { return std::size_t{1} << phase; }
  std::size_t forced_second() const { return phase * phase; }
  double phase_mean(std::size_t arm) const { return sum[arm] / static_cast<double>(count[arm]); }

  /// -sqrt(alpha log log n / n): the lower boundary for the in-phase mean of arm 0.
  static double first_arm_threshold(std::size_t n) {
    const auto x = static_cast<double>(n);
    return -std::sqrt(kAlpha * std::log(std::log(x)) / x);
  }
};

/// Feeds the reward of the previous pull (if any) and returns the next arm.
inline std::pair<std::size_t, PhasedState> phased_step(PhasedState state, std::optional<double> last_reward) {
  using Mode = PhasedState::Mode;
  if (last_reward) {
    if (!state.last_arm) throw std::logic_error("reward supplied before any arm was chosen");
    ++state.count[*state.last_arm];
    state.sum[*state.last_arm] += *last_reward;
  }
  if (state.phase >= 62) throw std::overflow_error("phase counter overflow");
  for (;;) {
    switch (state.mode) {
      case Mode::kForcedFirst:
        if (state.count[0] < state.forced_first()) {
          state.last_arm = 0;
          return {0, state};
        }
        state.mode = Mode::kForcedSecond;
        break;
      case Mode::kForcedSecond:
        if (state.count[1] < state.forced_second()) {
          state.last_arm = 1;
          return {1, state};
        }
        if (state.phase_mean(0) >= PhasedState::first_arm_threshold(state.count[0]) && state.phase_mean(1) < -0.5) {
          state.mode = Mode::kRunFirst;
        } else {
          state.mode = Mode::kRunSecond;
        }
        break;
      case Mode::kRunFirst:
        if (state.phase_mean(0) >= PhasedState::first_arm_threshold(state.count[0])) {
          state.last_arm = 0;
          return {0, state};
        }
        state = PhasedState{state.phase + 1};
        break;
      case Mode::kRunSecond:
        if (state.phase_mean(1) >= -0.5) {
          state.last_arm = 1;
          return {1, state};
        }
        state = PhasedState{state.phase + 1};
        break;
    }
  }
}

// -- Policy objects -----------------------------------------------------------

enum class PolicyKind { kUcb, kUcbs, kUcbsRiskAverse, kPhased };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kUcbs;
  double alpha = 4.0;
  ConfidenceMode mode = ConfidenceMode::kExact;
};

inline std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kUcb:
      return "ucb";
    case PolicyKind::kUcbs:
      return "ucbs";
    case PolicyKind::kUcbsRiskAverse:
      return "ucbs-ra";
    case PolicyKind::kPhased:
      return "phased";
  }
  return "?";
}

/// Default exploration parameter: 2 for UCB, 4 for the UCB-S family, 5 for phased.
inline double default_alpha(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kUcb:
      return 2.0;
    case PolicyKind::kPhased:
      return PhasedState::kAlpha;
    default:
      return 4.0;
  }
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view id) {
  if (id == "ucb") return PolicyKind::kUcb;
  if (id == "ucbs") return PolicyKind::kUcbs;
  if (id == "ucbs-ra") return PolicyKind::kUcbsRiskAverse;
  if (id == "phased") return PolicyKind::kPhased;
  return std::nullopt;
}

/// Spec from an identifier with its default alpha.
inline PolicySpec policy_spec(std::string_view id) {
  const auto kind = parse_policy_kind(id);
  if (!kind) throw std::invalid_argument("unknown policy '" + std::string(id) + "'");
  return {*kind, default_alpha(*kind), ConfidenceMode::kExact};
}

/// One episode's worth of arm-selection state.
class Policy {
 public:
  virtual ~Policy() = default;
  /// Arm to play at step t; `stats` holds the first t-1 rewards.
  virtual std::size_t select(const ArmStatistics& stats, std::size_t t) = 0;
  virtual void observe(std::size_t /*arm*/, double /*reward*/) {}
};

class UcbPolicy final : public Policy {
 public:
  UcbPolicy(double alpha, double sigma2) : alpha_(alpha), sigma2_(sigma2) {}
  std::size_t select(const ArmStatistics& stats, std::size_t t) override {
    return ucb_select(stats, t, alpha_, sigma2_);
  }

 private:
  double alpha_;
  double sigma2_;
};

class UcbsPolicy final : public Policy {
 public:
  UcbsPolicy(std::shared_ptr<const StructuredBandit> bandit, double alpha, ConfidenceMode mode)
      : bandit_(std::move(bandit)), alpha_(alpha), mode_(mode) {}
  std::size_t select(const ArmStatistics& stats, std::size_t t) override {
    compute_confidence_set(*bandit_, stats, t, alpha_, mode_, set_);
    return ucbs_select(set_, stats);
  }

 private:
  std::shared_ptr<const StructuredBandit> bandit_;
  double alpha_;
  ConfidenceMode mode_;
  ConfidenceSet set_;
};

class UcbsRiskAversePolicy final : public Policy {
 public:
  UcbsRiskAversePolicy(std::shared_ptr<const StructuredBandit> bandit, double alpha, ConfidenceMode mode)
      : bandit_(std::move(bandit)), alpha_(alpha), mode_(mode) {
    if (!bandit_->space().has_ambiguous_marks()) {
      throw std::invalid_argument("policy 'ucbs-ra' needs a problem with ambiguous-region marks");
    }
  }
  std::size_t select(const ArmStatistics& stats, std::size_t t) override {
    compute_confidence_set(*bandit_, stats, t, alpha_, mode_, set_);
    auto [arm, next] = ucbs_ra_select(*bandit_, set_, stats, state_, t);
    state_ = next;
    return arm;
  }
  const RiskAverseState& state() const noexcept { return state_; }

 private:
  std::shared_ptr<const StructuredBandit> bandit_;
  double alpha_;
  ConfidenceMode mode_;
  ConfidenceSet set_;
  RiskAverseState state_;
};

class PhasedPolicy final : public Policy {
 public:
  std::size_t select(const ArmStatistics& /*stats*/, std::size_t /*t*/) override {
    auto [arm, next] = phased_step(state_, pending_);
    state_ = next;
    pending_.reset();
    return arm;
  }
  void observe(std::size_t /*arm*/, double reward) override { pending_ = reward; }
  const PhasedState& state() const noexcept { return state_; }

 private:
  PhasedState state_;
  std::optional<double> pending_;
};

inline std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::shared_ptr<const StructuredBandit> bandit) {
  switch (spec.kind) {
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(spec.alpha, bandit->sigma2());
    case PolicyKind::kUcbs:
      return std::make_unique<UcbsPolicy>(std::move(bandit), spec.alpha, spec.mode);
    case PolicyKind::kUcbsRiskAverse:
      return std::make_unique<UcbsRiskAversePolicy>(std::move(bandit), spec.alpha, spec.mode);
    case PolicyKind::kPhased:
      if (bandit->arms() != 2) throw std::invalid_argument("policy 'phased' requires a two-armed problem");
      return std::make_unique<PhasedPolicy>();
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace sbandit
