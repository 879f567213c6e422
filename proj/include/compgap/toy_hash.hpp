#pragma once

#include <cstddef>
#include <cstdint>

#include "compgap/bitstring.hpp"

namespace compgap {

/// Constants of the toy hash. Every value here is part of the bit-exact
/// definition in docs/toy_hash.md.
namespace toy_hash_constants {
inline constexpr std::uint64_t kInit = 0x243F6A8885A308D3ULL;
inline constexpr std::uint64_t kMul = 0xD6E8FEB86659FD93ULL;
inline constexpr std::uint64_t kBlock = 0x9E3779B97F4A7C15ULL;
inline constexpr unsigned kShiftA = 32;
inline constexpr unsigned kShiftB = 29;
}  // namespace toy_hash_constants

/// One xorshift-multiply permutation applied `rounds` times:
/// v ^= v >> 32; v *= kMul; v ^= v >> 29 (mod 2^64).
constexpr std::uint64_t toy_mix(std::uint64_t v, std::size_t rounds) noexcept {
  using namespace toy_hash_constants;
  for (std::size_t r = 0; r < rounds; ++r) {
    v ^= v >> kShiftA;
    v *= kMul;
    v ^= v >> kShiftB;
  }
  return v;
}

/// Chaining value after the length block, before any input word is absorbed.
constexpr std::uint64_t toy_hash_initial_state(std::size_t input_bits, std::size_t rounds) noexcept {
  return toy_mix(toy_hash_constants::kInit ^ static_cast<std::uint64_t>(input_bits), rounds);
}

/// Counts hash evaluations. Attack code charges every evaluation here so
/// transcripts can prove query budgets.
struct HashCounter {
  std::uint64_t calls = 0;
};

/// Deterministic non-cryptographic hash of a bit string.
///
///   s = mix(kInit ^ len)
///   for each 64-bit input word w (zero padded): s = mix(s ^ w)
///   output block j = mix(s ^ (kBlock * (j + 1)))
///   output bit i = bit i%64 of block i/64
///
/// `out_bits` must be at least 1.
inline BitString toy_hash(const BitString& input, std::size_t out_bits, std::size_t rounds) {
  if (out_bits == 0) throw LengthError("toy_hash needs at least one output bit");
  std::uint64_t s = toy_hash_initial_state(input.size(), rounds);
  for (auto w : input.words()) s = toy_mix(s ^ w, rounds);
  BitString out(out_bits);
  for (std::size_t j = 0; 64 * j < out_bits; ++j) {
    std::uint64_t block = toy_mix(s ^ (toy_hash_constants::kBlock * (j + 1)), rounds);
    std::size_t c = std::min<std::size_t>(64, out_bits - 64 * j);
    out.write_bits(64 * j, c, block);
  }
  return out;
}

/// Fast path for inputs and outputs of at most 64 bits, matching toy_hash
/// bit for bit. `initial` must be toy_hash_initial_state(input_bits, rounds).
constexpr std::uint64_t toy_hash_word(std::uint64_t initial, std::uint64_t input, std::size_t out_bits,
                                      std::size_t rounds) noexcept {
  std::uint64_t s = toy_mix(initial ^ input, rounds);
  std::uint64_t block = toy_mix(s ^ toy_hash_constants::kBlock, rounds);
  return out_bits >= 64 ? block : block & ((std::uint64_t{1} << out_bits) - 1);
}

}  // namespace compgap
