#pragma once

#include <cstdint>
#include <random>

namespace ledgernet {

// std::uniform_int_distribution is implementation-defined, so seeded output
// would differ between standard libraries. These helpers only rely on the
// fully specified mt19937_64 engine.

/// Uniform integer in [0, bound), bound > 0. Rejection sampling on the top
/// bits, unbiased.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x <= limit) return x % bound;
  }
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace ledgernet
