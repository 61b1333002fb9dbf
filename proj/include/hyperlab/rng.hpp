#pragma once

#include <cstdint>
#include <random>

namespace hyperlab {

/// SplitMix64 finalizer; used only to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for worker/partition `index` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// The single generator used across the workbench: a 64-bit Mersenne Twister
/// whose output sequence is fixed by the C++ standard. Distributions are
/// implemented here rather than through <random> distribution classes, whose
/// algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), rejection-sampled so it is unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
    std::uint64_t x = engine_();
    while (x < threshold) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hyperlab
