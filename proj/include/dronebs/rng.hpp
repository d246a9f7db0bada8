#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dronebs {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream));
}

/// Seeded random source with bit-reproducible output on every platform.
/// The std engine's sequence is fixed by the standard; the distributions
/// are written out here because the std ones are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n), unbiased.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Poisson variate by Knuth's product method, split into chunks so that
  /// exp(-mean) never underflows.
  std::uint64_t poisson(double mean) {
    constexpr double kChunk = 500.0;
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double m = mean > kChunk ? kChunk : mean;
      mean -= m;
      const double limit = std::exp(-m);
      double prod = uniform();
      while (prod > limit) {
        ++total;
        prod *= uniform();
      }
    }
    return total;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace dronebs
