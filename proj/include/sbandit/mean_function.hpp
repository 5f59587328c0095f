#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sbandit {

/// Which one-sided value a jump breakpoint takes at the breakpoint itself.
enum class JumpSide { kLeft, kRight };

/// A breakpoint of a piecewise-linear function. `left` is the limit from
/// below and `right` the limit from above; they differ only at jumps.
struct Breakpoint {
  double theta = 0.0;
  double left = 0.0;
  double right = 0.0;
  JumpSide at = JumpSide::kRight;

  static Breakpoint continuous(double theta, double value) { return {theta, value, value, JumpSide::kRight}; }
  static Breakpoint jump(double theta, double left, double right, JumpSide at = JumpSide::kRight) {
    return {theta, left, right, at};
  }

  double value() const noexcept { return at == JumpSide::kLeft ? left : right; }
};

/// Piecewise-linear function over [front().theta, back().theta], linearly
/// interpolated between consecutive breakpoints.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;

  explicit PiecewiseLinear(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw std::invalid_argument("piecewise-linear function needs at least two breakpoints");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i - 1].theta < points_[i].theta)) {
        throw std::invalid_argument("piecewise-linear breakpoints must be strictly increasing");
      }
    }
    // The domain ends have only one side.
    points_.front().left = points_.front().right;
    points_.front().at = JumpSide::kRight;
    points_.back().right = points_.back().left;
    points_.back().at = JumpSide::kLeft;
  }

  /// Linear function through (a, fa) and (b, fb); a convenience for catalog entries.
  static PiecewiseLinear line(double a, double fa, double b, double fb) {
    return PiecewiseLinear({Breakpoint::continuous(a, fa), Breakpoint::continuous(b, fb)});
  }

  double lower() const noexcept { return points_.front().theta; }
  double upper() const noexcept { return points_.back().theta; }
  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

  double operator()(double theta) const {
    const std::size_t seg = locate(theta);
    const Breakpoint& a = points_[seg];
    if (theta == a.theta) return a.value();
    const Breakpoint& b = points_[seg + 1];
    if (theta == b.theta) return b.value();
    return interpolate(a, b, theta);
  }

  /// Limit of the function as the argument decreases to `theta`.
  double right_limit(double theta) const {
    const std::size_t seg = locate(theta);
    const Breakpoint& a = points_[seg];
    if (theta == a.theta) return a.right;
    const Breakpoint& b = points_[seg + 1];
    if (theta == b.theta) return b.right;
    return interpolate(a, b, theta);
  }

  /// Limit of the function as the argument increases to `theta`.
  double left_limit(double theta) const {
    const std::size_t seg = locate(theta);
    const Breakpoint& a = points_[seg];
    if (theta == a.theta) return a.left;
    const Breakpoint& b = points_[seg + 1];
    if (theta == b.theta) return b.left;
    return interpolate(a, b, theta);
  }

 private:
  static double interpolate(const Breakpoint& a, const Breakpoint& b, double theta) noexcept {
    const double w = (theta - a.theta) / (b.theta - a.theta);
    return a.right + w * (b.left - a.right);
  }

  // Index of the segment [p_i, p_{i+1}] holding theta (the last one for theta == upper).
  std::size_t locate(double theta) const {
    if (!(theta >= lower() && theta <= upper())) {
      throw std::out_of_range("theta " + std::to_string(theta) + " outside the breakpoint range");
    }
    std::size_t lo = 0;
    std::size_t hi = points_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (points_[mid].theta <= theta) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  std::vector<Breakpoint> points_;
};

/// Mean values listed per point of a finite parameter space, in point order.
struct Tabulated {
  std::vector<double> values;
};

/// mu(theta) = theta[axis] on a box parameter space.
struct Coordinate {
  std::size_t axis = 0;
};

using MeanFunction = std::variant<PiecewiseLinear, Tabulated, Coordinate>;

}  // namespace sbandit
