#pragma once

#include <cstdint>
#include <random>

namespace keygraph {

/// Deterministic pseudorandom stream.
///
/// Backed by std::mt19937_64, whose output sequence and std::seed_seq
/// initialization are fixed by the C++ standard. All derived draws (bounded
/// integers, unit reals, Bernoulli trials) are computed here rather than by
/// the implementation-defined <random> distributions, so a given seed yields
/// the same sequence on every conforming platform.
///
/// Sub-stream rule: the stream for (master, grid_point, trial) is seeded by
/// std::seed_seq over the six 32-bit words
///   {lo(master), hi(master), lo(grid_point), hi(grid_point), lo(trial), hi(trial)}.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  RngStream(std::uint64_t master_seed, std::uint64_t grid_point,
            std::uint64_t trial);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [0, bound); bound must be positive. Lemire's multiply-shift
  /// with rejection, so the result is exactly uniform.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// True with probability p (p >= 1 always true, p <= 0 always false).
  /// Consumes exactly one draw regardless of p.
  bool bernoulli(double p) { return next_unit() < p; }

 private:
  std::mt19937_64 engine_;
};

RngStream derive_trial_stream(std::uint64_t master_seed,
                              std::uint64_t grid_point_index,
                              std::uint64_t trial_index);

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace keygraph
