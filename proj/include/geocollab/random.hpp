// Seeded random helpers with results fixed across standard libraries.
// std::mt19937_64 output is fully specified; the distributions in <random>
// are not, so sampling goes through these instead.
#pragma once

#include <cstdint>
#include <random>

namespace geocollab {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), bound > 0, by rejection (no modulo bias).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace geocollab
