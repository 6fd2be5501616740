#pragma once

#include <cstdint>
#include <random>

namespace bbga {

/// Random stream owned by a single run. One stream per run; never shared.
using Stream = std::mt19937_64;

/// splitmix64 finalizer. Bijective avalanche over 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a base seed and two indices:
///   h = mix64(base + G); h = mix64(h ^ (a + 2G)); h = mix64(h ^ (b + 3G))
/// with G = 0x9E3779B97F4A7C15. The result depends only on (base, a, b), so
/// seeds stay stable regardless of the order in which runs are dispatched.
constexpr std::uint64_t seed_mix(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) noexcept {
  constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t h = mix64(base + golden);
  h = mix64(h ^ (a + 2 * golden));
  return mix64(h ^ (b + 3 * golden));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Stream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Stream& rng, std::uint64_t bound);

/// Bernoulli(p) trial; p <= 0 and p >= 1 consume no randomness.
inline bool coin(Stream& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

}  // namespace bbga
