#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sbandit {

/// A parameter value. Interval spaces use a real number; finite spaces use the
/// ordinal of the point (0, 1, 2, ...) as a real number; box spaces use a
/// coordinate vector.
using Theta = std::variant<double, std::vector<double>>;

inline double scalar_of(const Theta& theta) {
  if (const double* x = std::get_if<double>(&theta)) return *x;
  throw std::invalid_argument("expected a scalar parameter value");
}

/// Closed interval [lo, hi]; used for ambiguous-region marks.
struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Uniform grid of `count` points on [lo, hi] including both endpoints.
/// Point i is ((count-1-i)*lo + i*hi)/(count-1), which is exact at both ends
/// and at the midpoint of symmetric ranges.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const auto last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const auto w = static_cast<double>(i);
    grid[i] = ((last - w) * lo + w * hi) / last;
    if (grid[i] == 0.0) grid[i] = 0.0;  // drop the sign of -0
  }
  return grid;
}

class ParameterSpace {
 public:
  enum class Kind { kInterval, kFinite, kBox };

  static constexpr std::size_t kDefaultResolution = 2001;

  static ParameterSpace interval(double lower, double upper, std::size_t resolution = kDefaultResolution) {
    if (!(lower < upper)) throw std::invalid_argument("interval space needs lower < upper");
    if (resolution < 2) throw std::invalid_argument("interval space needs grid resolution >= 2");
    ParameterSpace s;
    s.kind_ = Kind::kInterval;
    s.lower_ = lower;
    s.upper_ = upper;
    s.resolution_ = resolution;
    return s;
  }

  static ParameterSpace finite(std::vector<std::string> labels) {
    if (labels.empty()) throw std::invalid_argument("finite space needs at least one point");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (labels[i] == labels[j]) throw std::invalid_argument("duplicate point label '" + labels[i] + "'");
      }
    }
    ParameterSpace s;
    s.kind_ = Kind::kFinite;
    s.labels_ = std::move(labels);
    s.lower_ = 0.0;
    s.upper_ = static_cast<double>(s.labels_.size() - 1);
    s.resolution_ = s.labels_.size();
    return s;
  }

  /// [lower, upper]^dims, the classic unstructured bandit embedding.
  static ParameterSpace box(double lower, double upper, std::size_t dims) {
    if (!(lower < upper)) throw std::invalid_argument("box space needs lower < upper");
    if (dims == 0) throw std::invalid_argument("box space needs at least one dimension");
    ParameterSpace s;
    s.kind_ = Kind::kBox;
    s.lower_ = lower;
    s.upper_ = upper;
    s.dims_ = dims;
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  bool is_interval() const noexcept { return kind_ == Kind::kInterval; }
  bool is_finite() const noexcept { return kind_ == Kind::kFinite; }
  bool is_box() const noexcept { return kind_ == Kind::kBox; }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  std::size_t resolution() const noexcept { return resolution_; }
  std::size_t dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Copy of this interval space with a different grid resolution.
  ParameterSpace with_resolution(std::size_t resolution) const {
    if (!is_interval()) throw std::invalid_argument("only interval spaces have a grid resolution");
    ParameterSpace s = interval(lower_, upper_, resolution);
    s.ambiguous_ = ambiguous_;
    return s;
  }

  bool contains(const Theta& theta) const {
    if (kind_ == Kind::kBox) {
      const auto* v = std::get_if<std::vector<double>>(&theta);
      if (v == nullptr || v->size() != dims_) return false;
      for (double x : *v) {
        if (!(x >= lower_ && x <= upper_)) return false;
      }
      return true;
    }
    const double* x = std::get_if<double>(&theta);
    if (x == nullptr) return false;
    if (kind_ == Kind::kFinite) {
      return *x >= 0.0 && *x <= upper_ && *x == static_cast<double>(static_cast<std::size_t>(*x));
    }
    return *x >= lower_ && *x <= upper_;
  }

  /// Canonical enumeration in ascending order: the grid for interval spaces,
  /// the point ordinals for finite spaces.
  std::vector<double> enumerate() const {
    switch (kind_) {
      case Kind::kInterval:
        return uniform_grid(lower_, upper_, resolution_);
      case Kind::kFinite:
        return uniform_grid(0.0, upper_, labels_.size());
      case Kind::kBox:
        break;
    }
    throw std::invalid_argument("box spaces are not enumerable");
  }

  /// Ordinal of a labeled point of a finite space.
  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    return std::nullopt;
  }

  // Ambiguous-region marks. For finite spaces a mark [j, j] flags point j.
  void mark_ambiguous(ClosedInterval region) {
    if (kind_ == Kind::kBox) throw std::invalid_argument("box spaces do not support ambiguous marks");
    if (!(region.lo <= region.hi) || region.lo < lower_ || region.hi > upper_) {
      throw std::invalid_argument("ambiguous mark must lie inside the parameter space");
    }
    ambiguous_.push_back(region);
  }
  const std::vector<ClosedInterval>& ambiguous_marks() const noexcept { return ambiguous_; }
  bool has_ambiguous_marks() const noexcept { return !ambiguous_.empty(); }
  bool is_marked_ambiguous(double theta) const noexcept {
    for (const auto& m : ambiguous_) {
      if (m.contains(theta)) return true;
    }
    return false;
  }

 private:
  ParameterSpace() = default;

  Kind kind_ = Kind::kInterval;
  double lower_ = 0.0;
  double upper_ = 1.0;
  std::size_t resolution_ = kDefaultResolution;
  std::size_t dims_ = 1;
  std::vector<std::string> labels_;
  std::vector<ClosedInterval> ambiguous_;
};

}  // namespace sbandit
