#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ergmk {

/// Seeded stream over std::mt19937_64. The engine's output sequence is fixed
/// by the standard, and the conversions below are done by hand, so a seed
/// gives the same draws on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  /// Uniform integer in [0, k).
  std::uint64_t below(std::uint64_t k) {
    const auto limit = UINT64_MAX - UINT64_MAX % k;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % k;
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed of replicate k derived from a base seed (splitmix64 finaliser).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace ergmk
