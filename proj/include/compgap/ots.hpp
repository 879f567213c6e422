#pragma once

// Lamport-style one-time signatures over an hlen-bit toy_hash digest.
//
// The secret key holds 2*hlen preimages of slen bits, the verification key
// their hlen-bit hashes. Entry (i, b) sits at index 2*i + b in both keys. A
// signature on m reveals sk[i][digest(m)_i] for every digest bit i, so it is
// hlen*slen bits long.

#include <cstddef>
#include <cstdint>
#include <string>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"
#include "compgap/random.hpp"
#include "compgap/toy_hash.hpp"

namespace compgap {

struct OtsParams {
  std::size_t hlen = 16;
  std::size_t slen = 16;
  std::size_t hash_rounds = 2;

  std::size_t signature_len() const noexcept { return hlen * slen; }
  std::size_t vk_len() const noexcept { return 2 * hlen * hlen; }
  std::size_t sk_len() const noexcept { return 2 * hlen * slen; }

  void validate() const {
    if (hlen < 1) throw ConfigError("ots.hlen must be at least 1");
    if (slen < 1) throw ConfigError("ots.slen must be at least 1");
    if (hash_rounds < 1) throw ConfigError("ots.hash_rounds must be at least 1");
  }

  friend bool operator==(const OtsParams&, const OtsParams&) = default;
};

struct KeyPair {
  BitString sk;
  BitString vk;
};

/// Default cap on slen for exhaustive forging (2^slen candidates per position).
inline constexpr std::size_t kForgeSlenCap = 20;

namespace detail {

// Hash of an slen-bit preimage to hlen bits, taking the word fast path when both fit.
inline BitString hash_preimage(const OtsParams& p, const BitString& pre) {
  if (p.slen <= 64 && p.hlen <= 64) {
    std::uint64_t init = toy_hash_initial_state(p.slen, p.hash_rounds);
    return BitString::from_uint(toy_hash_word(init, pre.to_uint(), p.hlen, p.hash_rounds), p.hlen);
  }
  return toy_hash(pre, p.hlen, p.hash_rounds);
}

inline void check_lengths(const OtsParams& p, const BitString& vk, const BitString* sig) {
  if (vk.size() != p.vk_len()) {
    throw FormatError("verification key must have " + std::to_string(p.vk_len()) + " bits, got " +
                      std::to_string(vk.size()));
  }
  if (sig != nullptr && sig->size() != p.signature_len()) {
    throw FormatError("signature must have " + std::to_string(p.signature_len()) + " bits, got " +
                      std::to_string(sig->size()));
  }
}

}  // namespace detail

inline BitString ots_digest(const OtsParams& p, const BitString& message) {
  return toy_hash(message, p.hlen, p.hash_rounds);
}

inline KeyPair kgen(const OtsParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  KeyPair kp{random_bits(rng, p.sk_len()), BitString(p.vk_len())};
  for (std::size_t e = 0; e < 2 * p.hlen; ++e) {
    kp.vk.assign(e * p.hlen, detail::hash_preimage(p, kp.sk.slice(e * p.slen, p.slen)));
  }
  return kp;
}

inline BitString sign(const OtsParams& p, const BitString& sk, const BitString& message) {
  if (sk.size() != p.sk_len()) throw FormatError("secret key has the wrong length");
  BitString d = ots_digest(p, message);
  BitString sig(p.signature_len());
  for (std::size_t i = 0; i < p.hlen; ++i) {
    std::size_t e = 2 * i + (d[i] ? 1 : 0);
    sig.assign(i * p.slen, sk.slice(e * p.slen, p.slen));
  }
  return sig;
}

/// Accepts iff hash(sig_i) = vk[i][digest(message)_i] for every i. Throws
/// FormatError on malformed key or signature lengths.
inline bool verify(const OtsParams& p, const BitString& vk, const BitString& message, const BitString& sig,
                   HashCounter* counter = nullptr) {
  detail::check_lengths(p, vk, &sig);
  BitString d = ots_digest(p, message);
  if (counter != nullptr) counter->calls += 1;
  for (std::size_t i = 0; i < p.hlen; ++i) {
    std::size_t e = 2 * i + (d[i] ? 1 : 0);
    if (counter != nullptr) counter->calls += 1;
    if (!vk.matches_at(e * p.hlen, detail::hash_preimage(p, sig.slice(i * p.slen, p.slen)))) return false;
  }
  return true;
}

/// Finds, for digest bit i, the smallest slen-bit s (counting up from 0) with
/// hash(s) = vk[i][digest(message)_i]. Every hash evaluation is added to
/// `counter`. Throws PreimageNotFound when some entry has no preimage, which
/// can only happen for keys not produced by kgen.
inline BitString forge_exhaustive(const OtsParams& p, const BitString& vk, const BitString& message,
                                  HashCounter* counter = nullptr, std::size_t slen_cap = kForgeSlenCap) {
  detail::check_lengths(p, vk, nullptr);
  if (p.slen > slen_cap) {
    throw ConfigError("exhaustive forging is capped at slen <= " + std::to_string(slen_cap));
  }
  BitString d = ots_digest(p, message);
  HashCounter local;
  HashCounter& ctr = counter != nullptr ? *counter : local;
  ctr.calls += 1;
  BitString sig(p.signature_len());
  const std::uint64_t space = std::uint64_t{1} << p.slen;
  const bool fast = p.hlen <= 64;
  const std::uint64_t init = toy_hash_initial_state(p.slen, p.hash_rounds);
  for (std::size_t i = 0; i < p.hlen; ++i) {
    std::size_t e = 2 * i + (d[i] ? 1 : 0);
    bool found = false;
    if (fast) {
      std::uint64_t target = vk.read_bits(e * p.hlen, p.hlen);
      for (std::uint64_t s = 0; s < space; ++s) {
        ++ctr.calls;
        if (toy_hash_word(init, s, p.hlen, p.hash_rounds) == target) {
          sig.write_bits(i * p.slen, p.slen, s);
          found = true;
          break;
        }
      }
    } else {
      BitString target = vk.slice(e * p.hlen, p.hlen);
      for (std::uint64_t s = 0; s < space; ++s) {
        ++ctr.calls;
        if (toy_hash(BitString::from_uint(s, p.slen), p.hlen, p.hash_rounds) == target) {
          sig.write_bits(i * p.slen, p.slen, s);
          found = true;
          break;
        }
      }
    }
    if (!found) throw PreimageNotFound("no preimage for verification key entry " + std::to_string(e));
  }
  return sig;
}

}  // namespace compgap
