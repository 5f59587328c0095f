#pragma once

// Closed-form regret bounds, threshold functions and parameter classification
// for structured bandits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbandit/bandit.hpp"
#include "sbandit/confidence.hpp"
#include "sbandit/environment.hpp"

namespace sbandit {

// -- Threshold functions ------------------------------------------------------

namespace theory_detail {

// Bisection for the root of an increasing function on [lo, hi] with f(lo) < 0 <= f(hi).
template <typename F>
double increasing_root(F f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Least integer y > floor_point with f(y) >= 0, given f increasing beyond
// floor_point and a real root estimate. Checked exactly in both directions.
template <typename F>
std::uint64_t least_integer_above(F f, double root, double floor_point) {
  auto y = static_cast<std::uint64_t>(std::ceil(root));
  while (!(static_cast<double>(y) > floor_point && f(static_cast<double>(y)) >= 0.0)) ++y;
  while (static_cast<double>(y - 1) > floor_point && f(static_cast<double>(y - 1)) >= 0.0) --y;
  return y;
}

}  // namespace theory_detail

/// omega(x) = min{ y in N : z >= x log z for all real z >= y }.
inline std::uint64_t omega(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("omega needs a finite x > 0");
  // z - x log z is minimal at z = x with value x (1 - log x).
  if (x <= std::numbers::e) return 1;
  const auto g = [x](double z) { return z - x * std::log(z); };
  double hi = 2.0 * x;
  while (g(hi) < 0.0) hi *= 2.0;
  return theory_detail::least_integer_above(g, theory_detail::increasing_root(g, x, hi), x);
}

/// omega2(x) = min{ y in N, y > e : z >= x log log z for all real z >= y }.
inline std::uint64_t omega2(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("omega2 needs a finite x > 0");
  // h(z) = z - x log log z is increasing on (e, inf) when x <= e; otherwise it
  // is minimal where z log z = x.
  if (x <= std::numbers::e) return 3;
  const auto h = [x](double z) { return z - x * std::log(std::log(z)); };
  const double z_min = theory_detail::increasing_root([x](double z) { return z * std::log(z) - x; }, std::numbers::e, x);
  if (h(z_min) >= 0.0) return 3;
  double hi = 2.0 * std::max(x, z_min);
  while (h(hi) < 0.0) hi *= 2.0;
  const std::uint64_t y = theory_detail::least_integer_above(h, theory_detail::increasing_root(h, z_min, hi), z_min);
  return std::max<std::uint64_t>(y, 3);
}

/// max{ omega(8 sigma2 alpha K / eps^2), omega(8 sigma2 alpha K / dmin^2) }.
/// An infinite epsilon (every margin works) contributes nothing.
inline std::uint64_t omega_star(double epsilon, double delta_min, double alpha, std::size_t K, double sigma2) {
  if (!(epsilon > 0.0) || !(delta_min > 0.0) || !(alpha > 0.0) || K == 0 || !(sigma2 > 0.0)) {
    throw std::invalid_argument("omega_star needs positive arguments");
  }
  const double scale = 8.0 * sigma2 * alpha * static_cast<double>(K);
  std::uint64_t w = omega(scale / (delta_min * delta_min));
  if (std::isfinite(epsilon)) w = std::max(w, omega(scale / (epsilon * epsilon)));
  return w;
}

// -- Regret upper bounds ------------------------------------------------------

struct BoundInputs {
  GapProfile gaps;
  std::uint64_t n = 1;
  double alpha = 4.0;
  double sigma2 = 1.0;
  std::size_t K = 2;
};

/// Logarithmic bound for UCB-S with alpha > 2:
/// 2 Dmax K (alpha-1)/(alpha-2) + sum_{A'} 8 alpha sigma2 log n / D_i + sum_i D_i.
inline double theorem1_bound(const BoundInputs& in) {
  if (!(in.alpha > 2.0)) throw std::invalid_argument("the logarithmic bound needs alpha > 2");
  if (in.n < 1) throw std::invalid_argument("horizon must be >= 1");
  const double K = static_cast<double>(in.K);
  double bound = 2.0 * in.gaps.delta_max * K * (in.alpha - 1.0) / (in.alpha - 2.0);
  const double log_n = std::log(static_cast<double>(in.n));
  for (std::size_t i : in.gaps.suboptimal) bound += 8.0 * in.alpha * in.sigma2 * log_n / in.gaps.gaps[i];
  for (double d : in.gaps.gaps) bound += d;
  return bound;
}

/// Horizon-free bound for UCB-S with alpha = 4:
/// sum_{A'} (32 sigma2 log w / D_i + D_i) + 3 Dmax K + Dmax K^3 / w.
inline double theorem2_bound(const GapProfile& gaps, std::uint64_t omega_star_value, double sigma2, std::size_t K) {
  if (omega_star_value < 1) throw std::invalid_argument("omega* must be >= 1");
  const double w = static_cast<double>(omega_star_value);
  const double k = static_cast<double>(K);
  double bound = 3.0 * gaps.delta_max * k + gaps.delta_max * k * k * k / w;
  for (std::size_t i : gaps.suboptimal) bound += 32.0 * sigma2 * std::log(w) / gaps.gaps[i] + gaps.gaps[i];
  return bound;
}

/// u_i(n) = ceil(8 sigma2 alpha log n / gap^2).
inline std::uint64_t critical_samples(std::uint64_t n, double gap, double alpha, double sigma2) {
  if (!(gap > 0.0)) throw std::invalid_argument("critical samples need gap > 0");
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  return static_cast<std::uint64_t>(std::ceil(8.0 * sigma2 * alpha * std::log(static_cast<double>(n)) / (gap * gap)));
}

/// 2 K t^(1 - alpha): ceiling on the probability that some mean leaves its interval at step t.
inline double failure_probability_bound(std::size_t K, std::uint64_t t, double alpha) {
  return 2.0 * static_cast<double>(K) * std::pow(static_cast<double>(t), 1.0 - alpha);
}

/// 2 K z^(2 - alpha) / (alpha - 2): tail bound on the pulls of a suboptimal arm beyond z > u_i(n).
inline double pull_tail_bound(std::size_t K, double z, double alpha) {
  if (!(alpha > 2.0)) throw std::invalid_argument("the pull tail bound needs alpha > 2");
  return 2.0 * static_cast<double>(K) * std::pow(z, 2.0 - alpha) / (alpha - 2.0);
}

/// ceil(8 alpha sigma2 log t / eps^2): pulls of the optimal arm after which a
/// margin-eps problem makes UCB-S choose it whenever all intervals hold.
inline std::uint64_t optimal_arm_pulls_for_margin(std::uint64_t t, double epsilon, double alpha, double sigma2) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("margin must be > 0");
  return static_cast<std::uint64_t>(
      std::ceil(8.0 * alpha * sigma2 * std::log(static_cast<double>(t)) / (epsilon * epsilon)));
}

/// True iff some pulled arm's empirical mean is at least a confidence radius
/// away from its true mean (the failure event at step t).
inline bool confidence_violation(const std::vector<double>& true_means, const ArmStatistics& stats, std::size_t t,
                                 double alpha, double sigma2) {
  for (std::size_t i = 0; i < stats.arms(); ++i) {
    if (stats.pulls(i) == 0) continue;
    if (std::fabs(stats.mean(i) - true_means[i]) >= confidence_radius(t, stats.pulls(i), alpha, sigma2)) return true;
  }
  return false;
}

inline bool confidence_violation(const StructuredBandit& bandit, const Theta& theta_star, const ArmStatistics& stats,
                                 std::size_t t, double alpha) {
  return confidence_violation(bandit.means_at(theta_star), stats, t, alpha, bandit.sigma2());
}

/// 2 exp(-eps^2 n / (2 sigma2)): deviation bound for the mean of n samples.
inline double deviation_bound(double epsilon, std::uint64_t n, double sigma2) {
  return 2.0 * std::exp(-epsilon * epsilon * static_cast<double>(n) / (2.0 * sigma2));
}

// -- Lower bounds -------------------------------------------------------------

/// Relative entropy between N(a, sigma2) and N(b, sigma2).
inline double gaussian_kl(double mean_a, double mean_b, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("gaussian_kl needs sigma2 > 0");
  const double d = mean_a - mean_b;
  return d * d / (2.0 * sigma2);
}

/// 1/(8 theta): asymptotic floor on max(E R_n(-theta), E R_n(theta)) for the
/// symmetric two-arm problems.
inline double symmetric_lower_bound(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("symmetric lower bound needs theta > 0");
  return 1.0 / (8.0 * theta);
}

struct TradeoffFloors {
  double first = 0.0;   // floor on the regret at theta_1
  double second = 0.0;  // floor on the regret at theta_2
};

/// Floors implied by a pair theta_1, theta_2 sharing mu_1 with arms separated by delta:
/// first  = (1 + log(2 n delta^2)) / (8 delta) - R(theta_2)/2,
/// second = (n delta / 2) exp(-4 R(theta_1) delta) - R(theta_1).
inline TradeoffFloors tradeoff_lower_bounds(double delta, std::uint64_t n, double regret_theta1, double regret_theta2) {
  if (!(delta > 0.0)) throw std::invalid_argument("trade-off bounds need delta > 0");
  if (n < 1) throw std::invalid_argument("horizon must be >= 1");
  const double nn = static_cast<double>(n);
  return {(1.0 + std::log(2.0 * nn * delta * delta)) / (8.0 * delta) - regret_theta2 / 2.0,
          nn * delta / 2.0 * std::exp(-4.0 * regret_theta1 * delta) - regret_theta1};
}

// -- Parameter classification ---------------------------------------------------

struct EpsilonResult {
  std::optional<double> epsilon;  // +infinity when no parameter ever challenges the optimal arm
  bool degenerate = false;        // theta* has a tied optimal arm
};

inline double default_min_epsilon(const StructuredBandit& bandit) { return 1e-9 * bandit.mean_range(); }

/// Largest eps such that every parameter whose optimal-arm mean is within eps
/// of its value at theta* has the same strictly optimal arm. Computed exactly
/// on the atom decomposition: eps is the infimum of |mu_i*(theta*) - mu_i*(theta)|
/// over parameters where i* is not strictly optimal. Absent when that infimum
/// does not exceed `min_epsilon`.
inline EpsilonResult finite_regret_epsilon(const StructuredBandit& bandit, const Theta& theta_star,
                                           std::optional<double> min_epsilon = std::nullopt) {
  if (bandit.space().is_box()) throw std::invalid_argument("margin analysis needs a one-dimensional space");
  const std::vector<double> means = bandit.means_at(theta_star);
  const GapProfile g = gap_profile_of(means);
  const std::size_t best = g.optimal_arm;
  const std::size_t K = bandit.arms();
  for (std::size_t j = 0; j < K; ++j) {
    if (j != best && means[j] == means[best]) return {std::nullopt, true};
  }
  const double c = means[best];
  const Decomposition& dec = bandit.decomposition();

  double inf = kInf;
  const auto distance_on = [&](std::size_t a, double s_lo, double s_hi) {
    const double u = dec.lo_value(a, best) + s_lo * (dec.hi_value(a, best) - dec.lo_value(a, best));
    const double v = dec.lo_value(a, best) + s_hi * (dec.hi_value(a, best) - dec.lo_value(a, best));
    if ((u - c) * (v - c) <= 0.0) return 0.0;
    return std::min(std::fabs(u - c), std::fabs(v - c));
  };
  for (std::size_t a = 0; a < dec.size(); ++a) {
    for (std::size_t j = 0; j < K; ++j) {
      if (j == best) continue;
      const double d0 = dec.lo_value(a, j) - dec.lo_value(a, best);
      const double d1 = dec.hi_value(a, j) - dec.hi_value(a, best);
      if (dec.atom(a).point) {
        if (d0 >= 0.0) inf = std::min(inf, std::fabs(dec.lo_value(a, best) - c));
        continue;
      }
      // Closure of { s in (0,1) : d(s) >= 0 } for the linear difference d.
      if (d0 <= 0.0 && d1 <= 0.0 && !(d0 == 0.0 && d1 == 0.0)) continue;
      double s_lo = 0.0;
      double s_hi = 1.0;
      if (d0 < 0.0) s_lo = d0 / (d0 - d1);
      if (d1 < 0.0) s_hi = d0 / (d0 - d1);
      inf = std::min(inf, distance_on(a, s_lo, s_hi));
    }
  }
  const double floor = min_epsilon.value_or(default_min_epsilon(bandit));
  if (!(inf > floor)) return {std::nullopt, false};
  return {inf, false};
}

struct ThetaClass {
  enum class Label { kEasy, kAmbiguous, kHard };
  Label label = Label::kAmbiguous;
  std::optional<double> witness;  // Hard: a parameter sharing the optimal arm's mean but not its optimality
  std::optional<double> epsilon;  // Easy: the margin
};

inline std::string_view label_name(ThetaClass::Label label) {
  switch (label) {
    case ThetaClass::Label::kEasy:
      return "easy";
    case ThetaClass::Label::kAmbiguous:
      return "ambiguous";
    case ThetaClass::Label::kHard:
      return "hard";
  }
  return "?";
}

/// Searches for theta' with mu_best(theta') = c (within tol) where the other
/// arm is better by more than tol. Two-armed problems only.
inline std::optional<double> hard_witness(const StructuredBandit& bandit, std::size_t best, double c, double tol) {
  const std::size_t other = 1 - best;
  const Decomposition& dec = bandit.decomposition();
  const auto verified = [&](double x) {
    const double mb = bandit.evaluate_mean(best, x);
    return std::fabs(mb - c) <= tol && bandit.evaluate_mean(other, x) - mb > tol;
  };
  for (std::size_t a = 0; a < dec.size(); ++a) {
    const auto& atom = dec.atom(a);
    if (atom.point) {
      if (verified(atom.lo)) return atom.lo;
      continue;
    }
    const double u = dec.lo_value(a, best);
    const double v = dec.hi_value(a, best);
    const double w = atom.hi - atom.lo;
    if (std::fabs(u - c) <= tol && std::fabs(v - c) <= tol) {
      // Flat at the level: any interior point where the other arm wins.
      const double d0 = dec.lo_value(a, other) - u;
      const double d1 = dec.hi_value(a, other) - v;
      const double dmax = std::max(d0, d1);
      if (!(dmax > tol)) continue;
      double s = 0.5;
      if (!(d0 + 0.5 * (d1 - d0) > tol)) s = (0.5 * (tol + dmax) - d0) / (d1 - d0);
      const double x = atom.lo + s * w;
      if (x > atom.lo && x < atom.hi && verified(x)) return x;
      continue;
    }
    if (u == v) continue;
    const double s = (c - u) / (v - u);
    if (!(s > 0.0 && s < 1.0)) continue;
    const double x = atom.lo + s * w;
    if (x > atom.lo && x < atom.hi && verified(x)) return x;
  }
  return std::nullopt;
}

/// Easy / Ambiguous / Hard label of a parameter of a two-armed problem.
inline ThetaClass classify_parameter(const StructuredBandit& bandit, const Theta& theta) {
  if (bandit.arms() != 2) throw std::invalid_argument("classification assumes a two-armed problem");
  if (bandit.space().is_box()) throw std::invalid_argument("classification needs a one-dimensional space");
  const std::vector<double> means = bandit.means_at(theta);
  if (means[0] == means[1]) throw std::invalid_argument("classification is undefined at a zero-gap parameter");
  const std::size_t best = means[1] > means[0] ? 1 : 0;
  const double tol = 1e-9 * bandit.mean_range();

  ThetaClass out;
  if (auto w = hard_witness(bandit, best, means[best], tol)) {
    out.label = ThetaClass::Label::kHard;
    out.witness = w;
    return out;
  }
  const EpsilonResult eps = finite_regret_epsilon(bandit, theta);
  if (eps.epsilon) {
    out.label = ThetaClass::Label::kEasy;
    out.epsilon = eps.epsilon;
    return out;
  }
  out.label = ThetaClass::Label::kAmbiguous;
  return out;
}

/// Grid supremum of (mu_j(theta') - mu_i(theta')) / |mu_i(theta) - mu_i(theta')|
/// over enumeration points with 0 < |mu_i(theta) - mu_i(theta')| < delta, where
/// i is the optimal arm at theta and j the other arm. Absent when no point qualifies.
inline std::optional<double> ambiguity_ratio(const StructuredBandit& bandit, const Theta& theta, double delta) {
  if (bandit.arms() != 2) throw std::invalid_argument("ambiguity ratio assumes a two-armed problem");
  if (!(delta > 0.0)) throw std::invalid_argument("ambiguity ratio needs delta > 0");
  const std::vector<double> means = bandit.means_at(theta);
  const std::size_t best = means[1] > means[0] ? 1 : 0;
  const std::size_t other = 1 - best;
  std::optional<double> sup;
  for (std::size_t p = 0; p < bandit.grid().size(); ++p) {
    const double diff = std::fabs(means[best] - bandit.grid_value(p, best));
    if (!(diff > 0.0 && diff < delta)) continue;
    const double ratio = (bandit.grid_value(p, other) - bandit.grid_value(p, best)) / diff;
    if (!sup || ratio > *sup) sup = ratio;
  }
  return sup;
}

/// ambiguity_ratio at delta = f * mean_range for f = 1e-1, 1e-2, 1e-3, 1e-4.
inline std::vector<std::pair<double, std::optional<double>>> ambiguity_profile(const StructuredBandit& bandit,
                                                                               const Theta& theta) {
  std::vector<std::pair<double, std::optional<double>>> out;
  for (double f : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double delta = f * bandit.mean_range();
    out.emplace_back(delta, ambiguity_ratio(bandit, theta, delta));
  }
  return out;
}

}  // namespace sbandit
