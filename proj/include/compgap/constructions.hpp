#pragma once

// Signature-wrapped learning problems.
//
// Wrapper with tamper detection: instance (x, sigma, [vk]) where a fresh key
// pair is drawn per sample, sigma signs x and [vk] is the Reed-Solomon
// encoding of vk. The classifier answers base_h(x) when the decoded key
// verifies sigma on x and STAR otherwise.
//
// Wrapper without tamper detection: instance ([x], sigma^n, [vk]) with n
// identical signature slots, n = codeword length. Label 1 carries a valid
// signature, label 0 a random invalid one. The classifier answers 1 iff some
// slot verifies against the decoded x and key; decode failure answers 0.
//
// Secret keys never leave the samplers.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"
#include "compgap/game.hpp"
#include "compgap/ots.hpp"
#include "compgap/random.hpp"
#include "compgap/reed_solomon.hpp"

namespace compgap {

/// Seed salts separating the base draw from the key and signature draws.
inline constexpr std::uint64_t kKeySalt = 0x6B657967ULL;
inline constexpr std::uint64_t kSigSalt = 0x73696773ULL;

/// Field offsets of the tamper-detecting instance (x, sigma, [vk]).
struct C1Layout {
  std::size_t d = 0;
  std::size_t ell = 0;
  std::size_t n = 0;

  C1Layout(std::size_t base_len, const OtsParams& ots, const EccParams& ecc)
      : d(base_len), ell(ots.signature_len()), n(ecc.code_bits()) {}

  std::size_t total() const noexcept { return d + ell + n; }
  std::size_t sigma_offset() const noexcept { return d; }
  std::size_t vk_offset() const noexcept { return d + ell; }

  BitString x(const BitString& inst) const { return inst.slice(0, d); }
  BitString sigma(const BitString& inst) const { return inst.slice(d, ell); }
  BitString vk_code(const BitString& inst) const { return inst.slice(d + ell, n); }

  BitString join(const BitString& x, const BitString& sigma, const BitString& vk_code) const {
    return concat({&x, &sigma, &vk_code});
  }
};

/// Field offsets of ([x], sigma_1..sigma_n, [vk]).
struct C3Layout {
  std::size_t n = 0;
  std::size_t ell = 0;
  std::size_t slots = 0;

  C3Layout(const OtsParams& ots, const EccParams& ecc)
      : n(ecc.code_bits()), ell(ots.signature_len()), slots(ecc.code_bits()) {}

  std::size_t total() const noexcept { return 2 * n + slots * ell; }
  std::size_t slot_offset(std::size_t i) const noexcept { return n + i * ell; }
  std::size_t vk_offset() const noexcept { return n + slots * ell; }

  BitString x_code(const BitString& inst) const { return inst.slice(0, n); }
  BitString slot(const BitString& inst, std::size_t i) const { return inst.slice(slot_offset(i), ell); }
  BitString vk_code(const BitString& inst) const { return inst.slice(vk_offset(), n); }
};

inline void check_wrapper_params(const OtsParams& ots, const EccParams& ecc) {
  ots.validate();
  ecc.validate();
  if (ecc.data_bits() != ots.vk_len()) {
    throw ConfigError("ecc data width (" + std::to_string(ecc.data_bits()) + " bits) must equal the verification key length (" +
                      std::to_string(ots.vk_len()) + " bits)");
  }
}

inline Sample wrap_sample_c1(const Problem& base, const OtsParams& ots, const EccParams& ecc, std::uint64_t seed) {
  check_wrapper_params(ots, ecc);
  Sample s = base.sample(seed);
  KeyPair kp = kgen(ots, mix_seed(seed, kKeySalt));
  BitString sigma = sign(ots, kp.sk, s.x);
  BitString vk_code = reed_solomon_for(ecc)->encode(kp.vk);
  C1Layout layout(base.instance_len(), ots, ecc);
  return {layout.join(s.x, sigma, vk_code), s.y};
}

inline Problem wrapped_problem_c1(const Problem& base, const OtsParams& ots, const EccParams& ecc) {
  check_wrapper_params(ots, ecc);
  C1Layout layout(base.instance_len(), ots, ecc);
  return Problem("c1(" + base.name() + ")", layout.total(), base.label_count(),
                 [base, ots, ecc](std::uint64_t seed) { return wrap_sample_c1(base, ots, ecc, seed); });
}

inline Hypothesis classifier_c1(const Hypothesis& base_h, const OtsParams& ots, const EccParams& ecc) {
  check_wrapper_params(ots, ecc);
  C1Layout layout(base_h.input_len(), ots, ecc);
  auto codec = reed_solomon_for(ecc);
  return Hypothesis(layout.total(), [base_h, ots, layout, codec](const BitString& inst) {
    auto vk = codec->decode(layout.vk_code(inst));
    if (!vk) return Label::star();
    BitString x = layout.x(inst);
    if (!verify(ots, *vk, x, layout.sigma(inst))) return Label::star();
    return base_h(x);
  });
}

/// Uniform x of `len` bits with an independent fair label bit.
inline Problem balanced_uniform_problem(std::size_t len) {
  return Problem("balanced-uniform", len, 2, [len](std::uint64_t seed) {
    Rng rng(seed);
    BitString x = random_bits(rng, len);
    Label y(static_cast<int>(rng() >> 63));
    return Sample{std::move(x), y};
  });
}

inline constexpr std::size_t kInvalidSignatureAttempts = 1000;

inline Sample sample_c3(const Problem& base, const OtsParams& ots, const EccParams& ecc, std::uint64_t seed) {
  check_wrapper_params(ots, ecc);
  if (base.instance_len() != ecc.data_bits()) {
    throw ConfigError("base instances must have exactly the ecc data width (" + std::to_string(ecc.data_bits()) + " bits)");
  }
  if (base.label_count() != 2) throw ConfigError("the no-detection wrapper needs binary labels");
  Sample s = base.sample(seed);
  KeyPair kp = kgen(ots, mix_seed(seed, kKeySalt));
  BitString sigma;
  if (s.y.value() == 1) {
    sigma = sign(ots, kp.sk, s.x);
  } else {
    Rng rng(mix_seed(seed, kSigSalt));
    std::size_t attempts = 0;
    do {
      if (++attempts > kInvalidSignatureAttempts) {
        throw SamplerError("could not draw an invalid signature in " + std::to_string(kInvalidSignatureAttempts) +
                           " attempts; the signature parameters are degenerate");
      }
      sigma = random_bits(rng, ots.signature_len());
    } while (verify(ots, kp.vk, s.x, sigma));
  }
  auto codec = reed_solomon_for(ecc);
  C3Layout layout(ots, ecc);
  BitString inst(layout.total());
  inst.assign(0, codec->encode(s.x));
  for (std::size_t i = 0; i < layout.slots; ++i) inst.assign(layout.slot_offset(i), sigma);
  inst.assign(layout.vk_offset(), codec->encode(kp.vk));
  return {std::move(inst), s.y};
}

inline Problem c3_problem(const Problem& base, const OtsParams& ots, const EccParams& ecc) {
  check_wrapper_params(ots, ecc);
  C3Layout layout(ots, ecc);
  return Problem("c3(" + base.name() + ")", layout.total(), 2,
                 [base, ots, ecc](std::uint64_t seed) { return sample_c3(base, ots, ecc, seed); });
}

inline Hypothesis classifier_c3(const OtsParams& ots, const EccParams& ecc) {
  check_wrapper_params(ots, ecc);
  C3Layout layout(ots, ecc);
  auto codec = reed_solomon_for(ecc);
  return Hypothesis(layout.total(), [ots, layout, codec](const BitString& inst) {
    auto x = codec->decode(layout.x_code(inst));
    if (!x) return Label(0);
    auto vk = codec->decode(layout.vk_code(inst));
    if (!vk) return Label(0);
    // Identical consecutive slots share a verdict; only distinct runs are verified.
    BitString last;
    bool have_last = false;
    for (std::size_t i = 0; i < layout.slots; ++i) {
      if (have_last && inst.matches_at(layout.slot_offset(i), last)) continue;
      last = layout.slot(inst, i);
      have_last = true;
      if (verify(ots, *vk, *x, last)) return Label(1);
    }
    return Label(0);
  });
}

}  // namespace compgap
