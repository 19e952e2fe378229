#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace nsync {

/// Seedable random stream used by every stochastic component.
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// standard, so experiments are reproducible bit-for-bit given a seed.
/// Bounded integers use rejection sampling on the raw 64-bit stream and
/// normals use Box-Muller on 53-bit uniforms; the combination is recorded
/// in experiment outputs under algorithm_id().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for run `index` under a common base seed.
  static Rng derive(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(mix(base_seed + index));
  }

  static constexpr std::string_view algorithm_id() {
    return "mt19937_64/rejection-bounded/box-muller53";
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform draw from {0, ..., n-1}. n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nsync
