#pragma once

#include <cstdint>
#include <random>

#include "compgap/bitstring.hpp"

namespace compgap {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives the seed of sub-stream `index` from `master`:
/// splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15), arithmetic mod 2^64.
/// Trial i of every estimator uses mix_seed(master, i).
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master + (index + 1) * kGolden);
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, n) by rejection, n > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

inline BitString random_bits(Rng& rng, std::size_t len) {
  BitString out(len);
  for (std::size_t i = 0; i < len; i += 64) {
    std::size_t c = std::min<std::size_t>(64, len - i);
    out.write_bits(i, c, rng());
  }
  return out;
}

}  // namespace compgap
