#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace seek {

/// SplitMix64 finalizer. Used to derive independent sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream tags for seed derivation. World randomness never shares a stream
/// with policy randomness, so paired evaluations see identical worlds.
enum class Stream : std::uint64_t {
  World = 1,
  Noise = 2,
  Policy = 3,
  Init = 4,
  Replay = 5,
  Explore = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream s) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s)));
}

/// Seeded random stream with fixed, portable transforms.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The library distributions are implementation-defined, so the
/// transforms are pinned here instead:
///   uniform01: top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
///   normal:    Box-Muller, two uniforms per draw, cosine branch only.
///   index(n):  modulo with rejection of the biased tail.
/// These never change within a major version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean = 0.0, double sigma = 1.0) {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace seek
