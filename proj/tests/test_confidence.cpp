#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sbandit/catalog.hpp"
#include "sbandit/confidence.hpp"

using namespace sbandit;

namespace {

StructuredBandit finite_two_point() {
  // A: (mu1, mu2) = (0, 1); B: (0, -1)
  return StructuredBandit(ParameterSpace::finite({"A", "B"}), {Tabulated{{0.0, 0.0}}, Tabulated{{1.0, -1.0}}}, 1.0);
}

bool in_pieces(const ConfidenceSet& cs, double x) {
  for (const auto& p : cs.pieces) {
    const bool above = p.lo_closed ? x >= p.lo : x > p.lo;
    const bool below = p.hi_closed ? x <= p.hi : x < p.hi;
    if (above && below) return true;
  }
  return false;
}

double distance_to_piece_ends(const ConfidenceSet& cs, double x) {
  double d = kInf;
  for (const auto& p : cs.pieces) d = std::min({d, std::fabs(x - p.lo), std::fabs(x - p.hi)});
  return d;
}

}  // namespace

TEST(ConfidenceRadius, Examples) {
  EXPECT_NEAR(confidence_radius(100, 100, 4, 1), std::sqrt(8 * std::log(100.0) / 100), 1e-15);
  EXPECT_NEAR(confidence_radius(100, 100, 4, 1), 0.6070, 1e-4);
  EXPECT_EQ(confidence_radius(1, 5, 4, 1), 0.0);
  EXPECT_EQ(confidence_radius(10, 0, 4, 1), kInf);
}

TEST(ConfidenceRadius, Monotonicity) {
  for (std::size_t t = 2; t < 200; t += 7) {
    for (std::size_t s = 1; s < 50; ++s) {
      EXPECT_GE(confidence_radius(t, s, 4, 1), confidence_radius(t, s + 1, 4, 1));
      EXPECT_LE(confidence_radius(t, s, 4, 1), confidence_radius(t + 1, s, 4, 1));
    }
  }
}

TEST(PlausibleSet, FiniteHandEnumeration) {
  const auto b = finite_two_point();
  const auto stats = ArmStatistics::from_summary({100, 100}, {0.0, 0.9});
  const auto cs = plausible_parameters(b, stats, 100, 4.0);
  ASSERT_FALSE(cs.empty);
  ASSERT_EQ(cs.pieces.size(), 1U);
  EXPECT_EQ(cs.pieces[0].lo, 0.0);  // point A
  EXPECT_TRUE(cs.contains(b, 0.0));
  EXPECT_FALSE(cs.contains(b, 1.0));
  EXPECT_DOUBLE_EQ(cs.sup[0], 0.0);
  EXPECT_DOUBLE_EQ(cs.sup[1], 1.0);
}

TEST(PlausibleSet, NoDataMeansWholeSpace) {
  const auto a = make_builtin("example-a");
  for (auto mode : {ConfidenceMode::kExact, ConfidenceMode::kGrid}) {
    const auto cs = plausible_parameters(a, ArmStatistics(2), 1, 4.0, mode);
    ASSERT_FALSE(cs.empty);
    EXPECT_EQ(cs.pieces.front().lo, -1.0);
    EXPECT_EQ(cs.pieces.back().hi, 1.0);
    EXPECT_DOUBLE_EQ(cs.sup[0], 1.0);
    EXPECT_DOUBLE_EQ(cs.sup[1], 1.0);
    for (double x : a.grid()) EXPECT_TRUE(in_pieces(cs, x));
  }
}

TEST(PlausibleSet, FarEstimatesGiveEmptySet) {
  const auto a = make_builtin("example-a");
  const auto stats = ArmStatistics::from_summary({1000, 1000}, {10.0, 10.0});
  for (auto mode : {ConfidenceMode::kExact, ConfidenceMode::kGrid}) {
    const auto cs = plausible_parameters(a, stats, 2000, 4.0, mode);
    EXPECT_TRUE(cs.empty);
    EXPECT_TRUE(cs.pieces.empty());
  }
}

TEST(PlausibleSet, StrictInequalityAtTheBoundary) {
  // Arm 0 pulled once at t = 1 has radius 0: only exact matches could qualify, and
  // the strict inequality excludes them.
  const auto b = finite_two_point();
  const auto stats = ArmStatistics::from_summary({1, 0}, {0.0, 0.0});
  EXPECT_TRUE(plausible_parameters(b, stats, 1, 4.0).empty);
}

TEST(PlausibleSet, ExactAgreesWithPredicateOnGrid) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mean(-1.2, 1.2);
  std::uniform_int_distribution<std::size_t> pulls(0, 400);
  for (const auto& name : builtin_names()) {
    const auto b = make_builtin(name);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::size_t> T(b.arms());
      std::vector<double> m(b.arms());
      for (std::size_t i = 0; i < b.arms(); ++i) {
        T[i] = pulls(gen);
        m[i] = mean(gen);
      }
      const auto stats = ArmStatistics::from_summary(T, m);
      const std::size_t t = stats.steps() + 1;
      const auto exact = plausible_parameters(b, stats, t, 4.0, ConfidenceMode::kExact);
      const auto grid = plausible_parameters(b, stats, t, 4.0, ConfidenceMode::kGrid);
      for (double x : b.grid()) {
        const bool pred = exact.contains(b, x);
        EXPECT_EQ(in_pieces(grid, x), pred);
        if (distance_to_piece_ends(exact, x) > 1e-9) EXPECT_EQ(in_pieces(exact, x), pred) << name << " x=" << x;
      }
      for (std::size_t i = 0; i < b.arms(); ++i) EXPECT_LE(grid.sup[i], exact.sup[i] + 1e-12);
    }
  }
}

TEST(PlausibleSet, ShrinksWithSmallerRadii) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> mean(-1, 1);
  std::uniform_int_distribution<std::size_t> pulls(1, 100);
  const auto b = make_builtin("example-c");
  for (int trial = 0; trial < 100; ++trial) {
    const auto stats = ArmStatistics::from_summary({pulls(gen), pulls(gen)}, {mean(gen), mean(gen)});
    const std::size_t t = stats.steps() + 1;
    const auto wide = plausible_parameters(b, stats, t, 4.0);
    const auto narrow = plausible_parameters(b, stats, t, 1.0);
    for (double x : b.grid()) {
      if (narrow.contains(b, x)) EXPECT_TRUE(wide.contains(b, x));
    }
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(narrow.sup[i], wide.sup[i]);
  }
}

TEST(PlausibleSet, BoxSupIsCappedUpperConfidenceValue) {
  const StructuredBandit box(ParameterSpace::box(-10, 10, 2), {Coordinate{0}, Coordinate{1}}, 1.0);
  const auto stats = ArmStatistics::from_summary({5, 50}, {1.0, 9.8});
  const auto cs = plausible_parameters(box, stats, 56, 4.0);
  ASSERT_FALSE(cs.empty);
  EXPECT_DOUBLE_EQ(cs.sup[0], 1.0 + confidence_radius(56, 5, 4, 1));
  EXPECT_DOUBLE_EQ(cs.sup[1], 10.0);
}

TEST(PlausibleSet, FirstMarkedPoint) {
  const auto amb = make_builtin("ambiguous-a");
  const auto all = plausible_parameters(amb, ArmStatistics(2), 1, 4.0);
  EXPECT_EQ(all.first_marked_point(amb.space()), -1.0);

  // Only theta in (0, 1] plausible: mu2 near 0 with a tight interval excludes theta <= 0.
  const auto stats = ArmStatistics::from_summary({1, 1000}, {-0.5, 0.0});
  const auto right = plausible_parameters(amb, stats, 1001, 4.0);
  ASSERT_FALSE(right.empty);
  EXPECT_FALSE(right.first_marked_point(amb.space()).has_value());
}
