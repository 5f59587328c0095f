#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sbandit/bandit.hpp"
#include "sbandit/environment.hpp"

namespace sbandit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// sqrt(2 alpha sigma2 log t / pulls); +infinity for an unpulled arm.
inline double confidence_radius(std::size_t t, std::size_t pulls, double alpha, double sigma2) {
  if (pulls == 0) return kInf;
  if (t == 0) throw std::invalid_argument("confidence radius needs t >= 1");
  return std::sqrt(2.0 * alpha * sigma2 * std::log(static_cast<double>(t)) / static_cast<double>(pulls));
}

/// How the plausible parameter set is computed on one-dimensional spaces.
enum class ConfidenceMode {
  kExact,  // open sub-intervals of the piecewise-linear atoms
  kGrid,   // points of the space enumeration
};

/// A connected part of the plausible set, in ascending parameter order.
/// Point pieces have lo == hi and both ends closed.
struct ConfidencePiece {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
};

/// Per-arm confidence intervals and the induced plausible parameter set,
/// together with sup_{theta in set} mu_k(theta) for every arm.
struct ConfidenceSet {
  ConfidenceMode mode = ConfidenceMode::kExact;
  std::vector<double> centers;
  std::vector<double> radii;
  std::vector<ConfidencePiece> pieces;  // empty for box spaces
  std::vector<double> sup;              // -infinity for every arm when the set is empty
  bool empty = true;

  /// Membership by the defining predicate: |mu_i(theta) - center_i| < radius_i for all arms.
  bool contains(const StructuredBandit& bandit, const Theta& theta) const {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (!(std::fabs(bandit.evaluate_mean(i, theta) - centers[i]) < radii[i])) return false;
    }
    return true;
  }

  /// Smallest-in-order parameter of the set lying in an ambiguous mark.
  /// Where the intersection has no least element (open left end) the midpoint
  /// of the first intersected piece is used.
  std::optional<double> first_marked_point(const ParameterSpace& space) const {
    for (const auto& p : pieces) {
      std::optional<double> best;
      for (const auto& m : space.ambiguous_marks()) {
        double lo = p.lo;
        bool lo_closed = p.lo_closed;
        if (m.lo > p.lo) {
          lo = m.lo;
          lo_closed = true;
        }
        double hi = p.hi;
        bool hi_closed = p.hi_closed;
        if (m.hi < p.hi) {
          hi = m.hi;
          hi_closed = true;
        }
        const bool nonempty = lo < hi || (lo == hi && lo_closed && hi_closed);
        if (!nonempty) continue;
        const double candidate = lo_closed ? lo : 0.5 * (lo + hi);
        if (!best || candidate < *best) best = candidate;
      }
      if (best) return best;
    }
    return std::nullopt;
  }
};

namespace confidence_detail {

inline void reset(ConfidenceSet& out, std::size_t arms, ConfidenceMode mode) {
  out.mode = mode;
  out.centers.resize(arms);
  out.radii.resize(arms);
  out.pieces.clear();
  out.sup.assign(arms, -kInf);
  out.empty = true;
}

inline bool point_plausible(const ConfidenceSet& cs, std::size_t arms, const auto& value_of) {
  for (std::size_t i = 0; i < arms; ++i) {
    if (!(std::fabs(value_of(i) - cs.centers[i]) < cs.radii[i])) return false;
  }
  return true;
}

inline void exact_one_dimensional(const StructuredBandit& bandit, ConfidenceSet& out) {
  const Decomposition& dec = bandit.decomposition();
  const std::size_t K = bandit.arms();
  for (std::size_t a = 0; a < dec.size(); ++a) {
    const auto& atom = dec.atom(a);
    if (atom.point) {
      if (!point_plausible(out, K, [&](std::size_t i) { return dec.lo_value(a, i); })) continue;
      out.pieces.push_back({atom.lo, atom.lo, true, true});
      for (std::size_t i = 0; i < K; ++i) out.sup[i] = std::max(out.sup[i], dec.lo_value(a, i));
      continue;
    }
    // On the open cell, arm i is a + s (b - a) for s in (0, 1).
    double s_lo = 0.0;
    double s_hi = 1.0;
    for (std::size_t i = 0; i < K && s_lo < s_hi; ++i) {
      const double r = out.radii[i];
      if (r == kInf) continue;
      const double fa = dec.lo_value(a, i);
      const double fb = dec.hi_value(a, i);
      const double m = out.centers[i];
      if (fa == fb) {
        if (!(std::fabs(fa - m) < r)) s_hi = s_lo;
        continue;
      }
      const double s1 = (m - r - fa) / (fb - fa);
      const double s2 = (m + r - fa) / (fb - fa);
      s_lo = std::max(s_lo, std::min(s1, s2));
      s_hi = std::min(s_hi, std::max(s1, s2));
    }
    if (!(s_lo < s_hi)) continue;
    const double width = atom.hi - atom.lo;
    const double x_lo = s_lo == 0.0 ? atom.lo : atom.lo + s_lo * width;
    const double x_hi = s_hi == 1.0 ? atom.hi : atom.lo + s_hi * width;
    out.pieces.push_back({x_lo, x_hi, false, false});
    for (std::size_t i = 0; i < K; ++i) {
      const double fa = dec.lo_value(a, i);
      const double fb = dec.hi_value(a, i);
      out.sup[i] = std::max({out.sup[i], fa + s_lo * (fb - fa), fa + s_hi * (fb - fa)});
    }
  }
}

inline void grid_one_dimensional(const StructuredBandit& bandit, ConfidenceSet& out) {
  const std::size_t K = bandit.arms();
  const auto& grid = bandit.grid();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (!point_plausible(out, K, [&](std::size_t i) { return bandit.grid_value(p, i); })) continue;
    out.pieces.push_back({grid[p], grid[p], true, true});
    for (std::size_t i = 0; i < K; ++i) out.sup[i] = std::max(out.sup[i], bandit.grid_value(p, i));
  }
}

// Product of per-axis intervals; arms sharing an axis intersect their constraints.
inline void box(const StructuredBandit& bandit, ConfidenceSet& out) {
  const auto& space = bandit.space();
  const std::size_t dims = space.dims();
  std::vector<double> lo(dims, space.lower());
  std::vector<double> hi(dims, space.upper());
  std::vector<bool> lo_closed(dims, true);
  std::vector<bool> hi_closed(dims, true);
  for (std::size_t i = 0; i < bandit.arms(); ++i) {
    const std::size_t axis = std::get<Coordinate>(bandit.means()[i]).axis;
    const double r = out.radii[i];
    if (r == kInf) continue;
    const double a = out.centers[i] - r;
    const double b = out.centers[i] + r;
    if (a >= lo[axis]) lo[axis] = a, lo_closed[axis] = false;
    if (b <= hi[axis]) hi[axis] = b, hi_closed[axis] = false;
  }
  for (std::size_t d = 0; d < dims; ++d) {
    const bool nonempty = lo[d] < hi[d] || (lo[d] == hi[d] && lo_closed[d] && hi_closed[d]);
    if (!nonempty) return;
  }
  out.empty = false;
  for (std::size_t i = 0; i < bandit.arms(); ++i) out.sup[i] = hi[std::get<Coordinate>(bandit.means()[i]).axis];
}

}  // namespace confidence_detail

/// Fills `out` with the plausible set for step t given statistics of the
/// first t-1 steps. Reuses the capacity of `out`.
inline void compute_confidence_set(const StructuredBandit& bandit, const ArmStatistics& stats, std::size_t t,
                                   double alpha, ConfidenceMode mode, ConfidenceSet& out) {
  const std::size_t K = bandit.arms();
  if (stats.arms() != K) throw std::invalid_argument("statistics do not match the bandit's arm count");
  confidence_detail::reset(out, K, mode);
  for (std::size_t i = 0; i < K; ++i) {
    out.centers[i] = stats.mean(i);
    out.radii[i] = confidence_radius(t, stats.pulls(i), alpha, bandit.sigma2());
  }
  if (bandit.space().is_box()) {
    confidence_detail::box(bandit, out);
    return;
  }
  if (mode == ConfidenceMode::kExact) {
    confidence_detail::exact_one_dimensional(bandit, out);
  } else {
    confidence_detail::grid_one_dimensional(bandit, out);
  }
  out.empty = out.pieces.empty();
}

/// The plausible parameter set of UCB-S at step t.
inline ConfidenceSet plausible_parameters(const StructuredBandit& bandit, const ArmStatistics& stats, std::size_t t,
                                          double alpha, ConfidenceMode mode = ConfidenceMode::kExact) {
  ConfidenceSet out;
  compute_confidence_set(bandit, stats, t, alpha, mode, out);
  return out;
}

}  // namespace sbandit
