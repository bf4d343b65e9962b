#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace swarmnav {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used for seed derivation and lattice hashing so that
// derived streams are decorrelated even for adjacent inputs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Combines any number of 64-bit words into one well-mixed seed.
inline std::uint64_t mix64(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x8000000080000001ull;
  for (std::uint64_t w : words) h = splitmix64(h ^ w);
  return h;
}

// Uniform double in [0, 1). Hand-rolled from raw engine output so results do
// not depend on the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace swarmnav
