#pragma once

#include <cstdint>
#include <random>

namespace sfmreg {

/// Deterministic random generator. Wraps std::mt19937_64 (whose output
/// sequence is pinned by the standard) and supplies its own integer and
/// floating point draws, because std::uniform_*_distribution is
/// implementation-defined and would break cross-platform reproducibility
/// of seeded pipelines.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling on the top of the range.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  /// Integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (always consumes two draws).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent child seed from (master, stream ids). SplitMix64
/// finalizer; identical inputs give identical child streams regardless of
/// evaluation order, which keeps parallel pipelines reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace sfmreg
