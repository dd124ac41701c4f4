#pragma once
/**
 * @file rng.hpp
 * @brief Deterministic counter-keyed random streams.
 *
 * Every consumer derives an independent stream from (seed, stream id); the
 * id is a sample index, a training phase tag, or similar. Streams are
 * stateless to construct, so work can be partitioned or reordered without
 * changing any drawn number. The generator is SplitMix64 seeded through a
 * double avalanche of seed and id; uniforms use the top 53 bits.
 */

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ettk {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(mix(seed) ^ mix(stream ^ 0x6a09e667f3bcc909ULL))) {}

  [[nodiscard]] std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  [[nodiscard]] double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller, second value cached).
  [[nodiscard]] double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace ettk
