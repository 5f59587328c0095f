#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sbandit/rng.hpp"

using namespace sbandit;

// Known-answer vectors for Philox4x32 with 10 rounds, from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5U);
  EXPECT_EQ(out[1], 0xe169c58dU);
  EXPECT_EQ(out[2], 0xbc57ac4cU);
  EXPECT_EQ(out[3], 0x9b00dbd8U);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32_10({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU}, {0xffffffffU, 0xffffffffU});
  EXPECT_EQ(out[0], 0x408f276dU);
  EXPECT_EQ(out[1], 0x41c83b0eU);
  EXPECT_EQ(out[2], 0xa20bc7c6U);
  EXPECT_EQ(out[3], 0x6d5451fdU);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U}, {0xa4093822U, 0x299f31d0U});
  EXPECT_EQ(out[0], 0xd16cfe09U);
  EXPECT_EQ(out[1], 0x94fdccebU);
  EXPECT_EQ(out[2], 0x5001e420U);
  EXPECT_EQ(out[3], 0x24126ea1U);
}

// Reference quantiles computed with scipy.stats.norm.ppf.
TEST(NormalQuantile, MatchesReferenceValues) {
  const std::pair<double, double> cases[] = {
      {1e-300, -37.0470962993612},    {1e-20, -9.262340089798409},  {1e-10, -6.361340902404056},
      {0.001, -3.090232306167813},    {0.02425, -1.972961051311885}, {0.3, -0.5244005127080409},
      {0.5, 0.0},                     {0.9, 1.2815515655446004},     {0.975, 1.959963984540054},
      {0.999999, 4.753424308817087},
  };
  for (const auto& [p, z] : cases) {
    EXPECT_NEAR(normal_quantile(p), z, 1e-13 * std::max(1.0, std::fabs(z))) << "p = " << p;
  }
  EXPECT_NEAR(normal_quantile(0.500000000001), 2.5065728237018607e-12, 1e-22);
}

TEST(NormalQuantile, IsAntisymmetric) {
  for (double p : {1e-8, 0.01, 0.2, 0.45}) EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-9 * std::fabs(normal_quantile(p)));
}

TEST(RandomStream, SameKeyReplays) {
  RandomStream a(3, 7);
  RandomStream b(3, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, CopyReplaysFromCopyPoint) {
  RandomStream a(42);
  a.next_u64();
  RandomStream b = a;
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_normal(0, 1), b.next_normal(0, 1));
}

TEST(RandomStream, StreamsDiffer) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t s = 0; s < 1000; ++s) keys.insert(derive_stream_key(1, s));
  EXPECT_EQ(keys.size(), 1000U);
  EXPECT_NE(derive_stream_key(1, 0), derive_stream_key(2, 0));
}

TEST(RandomStream, TwoWordsPerBlock) {
  RandomStream a(5);
  a.next_u64();
  EXPECT_EQ(a.blocks_consumed(), 1U);
  a.next_u64();
  EXPECT_EQ(a.blocks_consumed(), 1U);
  a.next_u64();
  EXPECT_EQ(a.blocks_consumed(), 2U);
}

TEST(RandomStream, UniformsAreOpenUnitInterval) {
  RandomStream s(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(11);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.next_normal(2.0, 3.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 2.0, 4 * 3.0 / std::sqrt(n));
  EXPECT_NEAR(var, 9.0, 0.15);
}
