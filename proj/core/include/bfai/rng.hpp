#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bfai {

/// All randomness flows through one engine type so that a (seed, call
/// sequence) pair fully determines every result, independent of platform
/// and standard-library version.
using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent stream id from a base seed and up to three
/// coordinates (e.g. replication index, budget index). Used so that
/// parallel schedules cannot change which stream a task sees.
inline uint64_t derive_seed(uint64_t base, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
  uint64_t s = base;
  uint64_t h = splitmix64(s);
  s ^= a + 0x165667b19e3779f9ull;
  h ^= splitmix64(s);
  s ^= b + 0x27d4eb2f165667c5ull;
  h ^= splitmix64(s);
  s ^= c + 0x85ebca77c2b2ae63ull;
  h ^= splitmix64(s);
  return h;
}

inline Rng make_rng(uint64_t seed) { return Rng(seed); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via the Box-Muller cosine branch: exactly two engine
/// calls per variate, no hidden distribution state.
inline double standard_normal(Rng& rng) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  double u1 = 1.0 - uniform01(rng);  // (0, 1]
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Uniform integer in [0, n). n must be >= 1.
inline int uniform_below(Rng& rng, int n) {
  // Rejection on the top of the range keeps the draw unbiased.
  const uint64_t bound = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % bound);
}

}  // namespace bfai
