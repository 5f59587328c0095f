#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sbandit/bandit.hpp"

namespace sbandit {

namespace catalog_detail {

inline PiecewiseLinear constant(double lo, double hi, double value) { return PiecewiseLinear::line(lo, value, hi, value); }

inline StructuredBandit two_arm(std::string name, PiecewiseLinear mu1, PiecewiseLinear mu2, double lo = -1.0,
                                double hi = 1.0) {
  return StructuredBandit(ParameterSpace::interval(lo, hi), {std::move(mu1), std::move(mu2)}, 1.0, std::move(name));
}

// Drawn level y of the 4x4 example panels maps to the mean (y - 2) / 2.
constexpr double level(double y) { return (y - 2.0) / 2.0; }

}  // namespace catalog_detail

/// Names accepted by make_builtin, in display order.
inline std::vector<std::string> builtin_names() {
  return {"example-a", "example-b", "example-c",  "example-d", "example-e",
          "example-f", "ambiguous-a", "counter-b", "counter-d"};
}

/// The catalog of example problems. All have unit-variance rewards and, except
/// `example-f`, the parameter interval [-1, 1]. Entries flagged reconstructed()
/// were read off drawings; their breakpoints are approximations.
inline StructuredBandit make_builtin(std::string_view name) {
  using catalog_detail::constant;
  using catalog_detail::level;
  using catalog_detail::two_arm;
  using B = Breakpoint;

  if (name == "example-a") {
    return two_arm("example-a", PiecewiseLinear::line(-1, -1, 1, 1), PiecewiseLinear::line(-1, 1, 1, -1));
  }
  if (name == "example-b") {
    return two_arm("example-b", constant(-1, 1, 0), PiecewiseLinear::line(-1, -1, 1, 1));
  }
  if (name == "example-c") {
    // mu1 = theta 1{theta > 0}, mu2 = -theta 1{theta < 0}
    return two_arm("example-c", PiecewiseLinear({B::continuous(-1, 0), B::continuous(0, 0), B::continuous(1, 1)}),
                   PiecewiseLinear({B::continuous(-1, 1), B::continuous(0, 0), B::continuous(1, 0)}));
  }
  if (name == "ambiguous-a") {
    // mu1 = -theta 1{theta > 0}, mu2 = -1{theta <= 0}; the jump of mu2 at 0 takes its left value.
    auto b = two_arm("ambiguous-a", PiecewiseLinear({B::continuous(-1, 0), B::continuous(0, 0), B::continuous(1, -1)}),
                     PiecewiseLinear({B::continuous(-1, -1), B::jump(0, -1, 0, JumpSide::kLeft), B::continuous(1, 0)}));
    b.mark_ambiguous({-1.0, 0.0});
    return b;
  }
  if (name == "example-d") {
    // The drawn arm-1 segment on (1/2, 1] ends level with arm 2; it is lowered
    // to 0.9 so that theta = 1 is not a tie.
    auto b = two_arm(
        "example-d",
        PiecewiseLinear({B::continuous(-1, 0.5), B::jump(-0.5, 0.5, -0.5), B::jump(0.5, -0.5, 0.5), B::continuous(1, 0.9)}),
        PiecewiseLinear({B::continuous(-1, 0.5), B::continuous(-0.5, 0), B::jump(0.5, 0, 1), B::continuous(1, 1)}));
    b.set_reconstructed(true);
    return b;
  }
  if (name == "example-e") {
    auto b = two_arm("example-e", PiecewiseLinear({B::continuous(-1, 0.5), B::jump(-0.5, 0.5, -0.5), B::continuous(1, 1)}),
                     PiecewiseLinear({B::continuous(-1, 1), B::jump(-0.5, 1, 0), B::continuous(1, 0)}));
    b.set_reconstructed(true);
    return b;
  }
  if (name == "example-f") {
    // Permutation bandit: on [k-1, k) the three arms take a permutation of three levels.
    const double levels[6][3] = {{1, 2, 3}, {2, 1, 3}, {3, 1, 2}, {3, 2, 1}, {2, 3, 1}, {1, 3, 2}};
    std::vector<MeanFunction> means;
    for (int arm = 0; arm < 3; ++arm) {
      std::vector<Breakpoint> pts{B::continuous(0, level(levels[0][arm]))};
      for (int k = 1; k < 6; ++k) pts.push_back(B::jump(k, level(levels[k - 1][arm]), level(levels[k][arm])));
      pts.push_back(B::continuous(6, level(levels[5][arm])));
      means.emplace_back(PiecewiseLinear(std::move(pts)));
    }
    StructuredBandit b(ParameterSpace::interval(0.0, 6.0), std::move(means), 1.0, "example-f");
    b.set_reconstructed(true);
    return b;
  }
  if (name == "counter-b") {
    // Two parameters share the mean of arm 1 while arm 2 sits Delta = 1/2 above or below it.
    auto b = two_arm("counter-b", constant(-1, 1, 0),
                     PiecewiseLinear({B::continuous(-1, -0.5), B::jump(0, -0.5, 0.5), B::continuous(1, 0.5)}));
    b.set_reconstructed(true);
    return b;
  }
  if (name == "counter-d") {
    auto b = two_arm("counter-d", PiecewiseLinear({B::continuous(-1, 0), B::continuous(0, 0), B::continuous(1, 0.5)}),
                     PiecewiseLinear({B::continuous(-1, -0.95), B::jump(0, -0.95, 0, JumpSide::kLeft),
                                      B::continuous(1, 0.95)}));
    b.mark_ambiguous({-1.0, 0.0});
    b.set_reconstructed(true);
    return b;
  }
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

}  // namespace sbandit
