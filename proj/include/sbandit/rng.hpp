#pragma once

// Portable, counter-based random streams.
//
// Every replication owns a Philox4x32-10 stream keyed by a 64-bit value derived
// from (base seed, stream index). Draw k of a stream is a pure function of
// (key, k), so results are identical regardless of thread scheduling or
// platform. Gaussians use the AS241 inverse normal CDF on a 53-bit uniform.

#include <array>
#include <cmath>
#include <cstdint>

namespace sbandit {

/// SplitMix64 finalizer. Used to whiten seeds before they become Philox keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key of stream `stream` under `base_seed`: mix64(mix64(base_seed) ^ stream).
/// Distinct streams of one base seed never share a key.
constexpr std::uint64_t derive_stream_key(std::uint64_t base_seed, std::uint64_t stream) noexcept {
  return mix64(mix64(base_seed) ^ stream);
}

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// The Philox4x32 bijection with 10 rounds (Salmon et al., Random123).
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53U;
  constexpr std::uint32_t kM1 = 0xCD9E8D57U;
  constexpr std::uint32_t kW0 = 0x9E3779B9U;
  constexpr std::uint32_t kW1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Inverse of the standard normal CDF (Wichura, AS241 PPND16), accurate to
/// about 1e-16 relative on (0, 1). Returns +-infinity at the endpoints.
inline double normal_quantile(double p) noexcept {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852854561 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  if (p <= 0.0) return -INFINITY;
  if (p >= 1.0) return INFINITY;
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

/// A single counter-based stream. Copyable; copies replay the same draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key = 0) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  RandomStream(std::uint64_t base_seed, std::uint64_t stream) noexcept
      : RandomStream(derive_stream_key(base_seed, stream)) {}

  /// Next 64 random bits. Each Philox block yields two words.
  std::uint64_t next_u64() noexcept {
    if (buffered_ == 0) {
      const PhiloxCounter out = philox4x32_10(
          {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), 0U, 0U}, key_);
      ++block_;
      words_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
      words_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
      buffered_ = 2;
    }
    return words_[2 - buffered_--];
  }

  /// Uniform on the open interval (0, 1): midpoint of one of 2^53 cells.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal(double mean, double stddev) noexcept {
    return mean + stddev * normal_quantile(next_uniform());
  }

  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int buffered_ = 0;
};

}  // namespace sbandit
