#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace foes {

/// SplitMix64 step (Steele, Lea & Flood); used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic child seed for stream (a, b) of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded from SplitMix64.
/// Uniform and normal variates are produced by in-house transforms so traces
/// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace foes
