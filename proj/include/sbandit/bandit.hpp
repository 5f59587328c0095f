#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sbandit/mean_function.hpp"
#include "sbandit/parameter_space.hpp"

namespace sbandit {

/// Gap structure of a bandit at one parameter value. Arms are 0-based.
struct GapProfile {
  std::size_t optimal_arm = 0;
  double optimal_mean = 0.0;
  std::vector<double> gaps;
  std::optional<double> delta_min;  // absent when every arm is optimal
  double delta_max = 0.0;
  std::vector<std::size_t> suboptimal;
};

/// Gap profile of a mean vector; ties go to the lowest arm index.
inline GapProfile gap_profile_of(const std::vector<double>& means) {
  GapProfile g;
  g.optimal_arm = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
  g.optimal_mean = means[g.optimal_arm];
  g.gaps.resize(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    g.gaps[i] = g.optimal_mean - means[i];
    g.delta_max = std::max(g.delta_max, g.gaps[i]);
    if (g.gaps[i] > 0.0) {
      g.suboptimal.push_back(i);
      g.delta_min = g.delta_min ? std::min(*g.delta_min, g.gaps[i]) : g.gaps[i];
    }
  }
  return g;
}

/// Exact decomposition of a one-dimensional space into atoms on which every
/// mean function is linear: isolated points (breakpoints of any arm, or the
/// points of a finite space) and the open cells between consecutive points.
class Decomposition {
 public:
  struct Atom {
    double lo = 0.0;
    double hi = 0.0;
    bool point = true;
  };

  Decomposition() = default;
  Decomposition(std::size_t arms, std::vector<Atom> atoms, std::vector<double> lo_values, std::vector<double> hi_values)
      : arms_(arms), atoms_(std::move(atoms)), lo_(std::move(lo_values)), hi_(std::move(hi_values)) {}

  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t size() const noexcept { return atoms_.size(); }
  const Atom& atom(std::size_t a) const { return atoms_[a]; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// Value at a point atom, or the right limit at the low end of a cell.
  double lo_value(std::size_t a, std::size_t arm) const { return lo_[a * arms_ + arm]; }
  /// Value at a point atom, or the left limit at the high end of a cell.
  double hi_value(std::size_t a, std::size_t arm) const { return hi_[a * arms_ + arm]; }

  /// Linear extension of the arm's mean on atom `a`, valid on its closure.
  double value_at(std::size_t a, std::size_t arm, double x) const {
    const Atom& at = atoms_[a];
    if (at.point || x <= at.lo) return lo_value(a, arm);
    if (x >= at.hi) return hi_value(a, arm);
    const double w = (x - at.lo) / (at.hi - at.lo);
    return lo_value(a, arm) + w * (hi_value(a, arm) - lo_value(a, arm));
  }

 private:
  std::size_t arms_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// A K-armed structured bandit: known mean functions of an unknown parameter
/// and Gaussian rewards with variance `sigma2`.
class StructuredBandit {
 public:
  StructuredBandit(ParameterSpace space, std::vector<MeanFunction> means, double sigma2, std::string name = "custom")
      : space_(std::move(space)), means_(std::move(means)), sigma2_(sigma2), name_(std::move(name)) {
    if (means_.empty()) throw std::invalid_argument("a bandit needs at least one arm");
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_)) throw std::invalid_argument("sigma2 must be finite and >= 0");
    for (std::size_t k = 0; k < means_.size(); ++k) validate_mean(k);
    build_tables();
  }

  std::size_t arms() const noexcept { return means_.size(); }
  const ParameterSpace& space() const noexcept { return space_; }
  const std::vector<MeanFunction>& means() const noexcept { return means_; }
  double sigma2() const noexcept { return sigma2_; }
  const std::string& name() const noexcept { return name_; }

  /// True when some mean functions were read off a drawing rather than a formula.
  bool reconstructed() const noexcept { return reconstructed_; }
  void set_reconstructed(bool flag) noexcept { reconstructed_ = flag; }

  void mark_ambiguous(ClosedInterval region) { space_.mark_ambiguous(region); }

  /// Copy with a different grid resolution (interval spaces only).
  StructuredBandit with_resolution(std::size_t resolution) const {
    StructuredBandit copy(space_.with_resolution(resolution), means_, sigma2_, name_);
    copy.reconstructed_ = reconstructed_;
    return copy;
  }

  /// Copy with every mean function shifted by `c`.
  StructuredBandit shifted(double c) const {
    std::vector<MeanFunction> out;
    for (const auto& m : means_) {
      if (const auto* pl = std::get_if<PiecewiseLinear>(&m)) {
        auto pts = pl->breakpoints();
        for (auto& p : pts) {
          p.left += c;
          p.right += c;
        }
        out.emplace_back(PiecewiseLinear(std::move(pts)));
      } else if (const auto* tab = std::get_if<Tabulated>(&m)) {
        Tabulated t = *tab;
        for (double& v : t.values) v += c;
        out.emplace_back(std::move(t));
      } else {
        throw std::invalid_argument("coordinate means cannot be shifted");
      }
    }
    StructuredBandit copy(space_, std::move(out), sigma2_, name_);
    copy.reconstructed_ = reconstructed_;
    return copy;
  }

  double evaluate_mean(std::size_t arm, const Theta& theta) const {
    if (arm >= arms()) {
      throw std::out_of_range("arm index " + std::to_string(arm) + " out of range for " + std::to_string(arms()) +
                              " arms");
    }
    if (!space_.contains(theta)) throw std::out_of_range("theta outside the parameter space");
    return std::visit(
        [&](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, PiecewiseLinear>) {
            return f(scalar_of(theta));
          } else if constexpr (std::is_same_v<F, Tabulated>) {
            return f.values[static_cast<std::size_t>(scalar_of(theta))];
          } else {
            return std::get<std::vector<double>>(theta)[f.axis];
          }
        },
        means_[arm]);
  }

  std::vector<double> means_at(const Theta& theta) const {
    std::vector<double> out(arms());
    for (std::size_t k = 0; k < arms(); ++k) out[k] = evaluate_mean(k, theta);
    return out;
  }

  GapProfile gap_profile(const Theta& theta) const { return gap_profile_of(means_at(theta)); }

  /// Exact atom decomposition; empty for box spaces.
  const Decomposition& decomposition() const noexcept { return decomposition_; }

  /// Enumeration points and their means (row-major, one row per point).
  const std::vector<double>& grid() const noexcept { return grid_; }
  double grid_value(std::size_t point, std::size_t arm) const { return grid_values_[point * arms() + arm]; }

  /// max - min of all mean values over the space (including one-sided limits).
  double mean_range() const noexcept { return mean_range_; }

 private:
  void validate_mean(std::size_t k) const {
    const std::string which = "mean function of arm " + std::to_string(k);
    const MeanFunction& m = means_[k];
    switch (space_.kind()) {
      case ParameterSpace::Kind::kInterval: {
        const auto* pl = std::get_if<PiecewiseLinear>(&m);
        if (pl == nullptr) throw std::invalid_argument(which + " must be piecewise-linear on an interval space");
        if (pl->lower() > space_.lower() || pl->upper() < space_.upper()) {
          throw std::invalid_argument(which + " does not cover the parameter interval");
        }
        break;
      }
      case ParameterSpace::Kind::kFinite: {
        const auto* tab = std::get_if<Tabulated>(&m);
        if (tab == nullptr) throw std::invalid_argument(which + " must be tabulated on a finite space");
        if (tab->values.size() != space_.labels().size()) {
          throw std::invalid_argument(which + " needs one value per parameter point");
        }
        break;
      }
      case ParameterSpace::Kind::kBox: {
        const auto* c = std::get_if<Coordinate>(&m);
        if (c == nullptr) throw std::invalid_argument(which + " must be a coordinate on a box space");
        if (c->axis >= space_.dims()) throw std::invalid_argument(which + " uses an axis outside the box");
        break;
      }
    }
  }

  void build_tables() {
    const std::size_t K = arms();
    if (space_.is_box()) {
      mean_range_ = space_.upper() - space_.lower();
      return;
    }
    grid_ = space_.enumerate();
    grid_values_.resize(grid_.size() * K);
    for (std::size_t p = 0; p < grid_.size(); ++p) {
      for (std::size_t k = 0; k < K; ++k) grid_values_[p * K + k] = evaluate_mean(k, grid_[p]);
    }

    std::vector<Decomposition::Atom> atoms;
    std::vector<double> lo_values;
    std::vector<double> hi_values;
    if (space_.is_finite()) {
      for (double x : grid_) atoms.push_back({x, x, true});
      lo_values = grid_values_;
      hi_values = grid_values_;
    } else {
      std::vector<double> nodes{space_.lower(), space_.upper()};
      for (const auto& m : means_) {
        for (const auto& bp : std::get<PiecewiseLinear>(m).breakpoints()) {
          if (bp.theta > space_.lower() && bp.theta < space_.upper()) nodes.push_back(bp.theta);
        }
      }
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        atoms.push_back({nodes[j], nodes[j], true});
        for (std::size_t k = 0; k < K; ++k) {
          const double v = evaluate_mean(k, nodes[j]);
          lo_values.push_back(v);
          hi_values.push_back(v);
        }
        if (j + 1 == nodes.size()) break;
        atoms.push_back({nodes[j], nodes[j + 1], false});
        for (std::size_t k = 0; k < K; ++k) {
          const auto& pl = std::get<PiecewiseLinear>(means_[k]);
          lo_values.push_back(pl.right_limit(nodes[j]));
          hi_values.push_back(pl.left_limit(nodes[j + 1]));
        }
      }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : lo_values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : hi_values) lo = std::min(lo, v), hi = std::max(hi, v);
    mean_range_ = hi - lo;
    decomposition_ = Decomposition(K, std::move(atoms), std::move(lo_values), std::move(hi_values));
  }

  ParameterSpace space_;
  std::vector<MeanFunction> means_;
  double sigma2_ = 1.0;
  std::string name_;
  bool reconstructed_ = false;

  Decomposition decomposition_;
  std::vector<double> grid_;
  std::vector<double> grid_values_;
  double mean_range_ = 0.0;
};

}  // namespace sbandit
