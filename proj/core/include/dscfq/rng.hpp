#pragma once

#include <cmath>
#include <cstdint>

namespace dscfq::core {

/// Deterministic 64-bit generator (splitmix64). One instance per random
/// stream; streams are derived from (seed, agent, kind) so that adding an
/// agent or switching scheduler kind never perturbs another agent's draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Unbiased draw in [0, n) via rejection. n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// Inclusive integer range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean (inverse CDF).
  double exponential(double mean) { return -mean * std::log(1.0 - uniform01()); }

 private:
  std::uint64_t state_;
};

enum class StreamKind : std::uint64_t {
  PacketLength = 1,
  Arrival = 2,
  SplitPulse = 3,
  Beb = 4,
  Aux = 5,
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}
}  // namespace detail

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t agent,
                            StreamKind kind) {
  std::uint64_t h = detail::mix64(seed + 0x632BE59BD9B4E019ULL);
  h = detail::mix64(h ^ (agent + 0x9E3779B97F4A7C15ULL));
  h = detail::mix64(h ^ static_cast<std::uint64_t>(kind));
  return SplitMix64(h);
}

}  // namespace dscfq::core
