#pragma once

// The attacker spectrum: identity, the optimal attack on the base problem,
// exhaustive Hamming-ball search, and the bounded/unbounded attacks on both
// signature wrappers.
//
// Bounded attackers model "polynomial-size circuit" by a budget on hash and
// oracle calls, enforced by OracleContext. Unbounded attackers run the same
// bookkeeping without a limit so transcripts still report their work.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compgap/base_problems.hpp"
#include "compgap/bitstring.hpp"
#include "compgap/constructions.hpp"
#include "compgap/game.hpp"
#include "compgap/ots.hpp"
#include "compgap/reed_solomon.hpp"

namespace compgap {

/// Structural attack on a base problem: up to `max_count` instances x' within
/// `b` flips of x with base_h(x') != y, most preferred first. Empty when x is
/// already misclassified or no such x' exists.
using BaseCandidates =
    std::function<std::vector<BitString>(const BitString& x, Label y, std::size_t b, std::size_t max_count)>;

/// Candidates against MAJ: flip exactly the required number of bits that agree
/// with y, choosing position sets in lexicographic order. The first candidate
/// flips the lowest-index such bits.
inline std::vector<BitString> majority_candidates(const BitString& x, Label y, std::size_t b, std::size_t max_count) {
  std::vector<BitString> out;
  if (majority(x) != y || max_count == 0) return out;
  const std::size_t d = x.size();
  const std::size_t ones = x.popcount();
  const std::size_t need = y.value() == 1 ? ones - (d - 1) / 2 : (d + 1) / 2 - ones;
  if (need > b) return out;
  std::vector<std::size_t> side;
  for (std::size_t i = 0; i < d; ++i) {
    if (static_cast<int>(x[i]) == y.value()) side.push_back(i);
  }
  std::vector<std::size_t> idx(need);
  for (std::size_t i = 0; i < need; ++i) idx[i] = i;
  const std::size_t m = side.size();
  while (out.size() < max_count) {
    BitString xp = x;
    for (auto i : idx) xp.flip(side[i]);
    out.push_back(std::move(xp));
    std::size_t pos = need;
    while (pos > 0 && idx[pos - 1] == m - need + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < need; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

namespace detail {

inline std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

inline void check_guessable(const OtsParams& p) {
  if (p.slen > 64 || p.hlen > 64) throw ConfigError("preimage guessing supports slen, hlen <= 64");
}

}  // namespace detail

inline Attacker identity_attacker() {
  return {"identity", AttackerPower::Identity, 0, 0,
          [](const BitString& x, Label, OracleContext&) { return x; }};
}

/// Optimal b-perturbing attacker for MajorityNoise.
inline Attacker greedy_majority_attacker(std::size_t b) {
  return {"greedy-majority", AttackerPower::Unbounded, 0, 0, [b](const BitString& x, Label y, OracleContext&) {
            auto c = majority_candidates(x, y, b, 1);
            return c.empty() ? x : c.front();
          }};
}

/// Queries the hypothesis on every point of the ball of radius b, nearest
/// first, and returns the first x' with h(x') != y and h(x') != STAR.
inline Attacker exhaustive_ball_attacker(std::size_t b) {
  return {"exhaustive-ball", AttackerPower::Unbounded, 0, 0, [b](const BitString& x, Label y, OracleContext& ctx) {
            if (ctx.classify(x) != y) return x;
            std::optional<BitString> found;
            const std::size_t d = x.size();
            std::vector<std::size_t> idx;
            for (std::size_t w = 1; w <= b && w <= d && !found; ++w) {
              idx.resize(w);
              for (std::size_t i = 0; i < w; ++i) idx[i] = i;
              for (;;) {
                BitString xp = x;
                for (auto i : idx) xp.flip(i);
                Label got = ctx.classify(xp);
                if (!got.is_star() && got != y) {
                  found = std::move(xp);
                  break;
                }
                std::size_t pos = w;
                while (pos > 0 && idx[pos - 1] == d - w + pos - 1) --pos;
                if (pos == 0) break;
                ++idx[pos - 1];
                for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
              }
            }
            return found ? *found : x;
          }};
}

/// Public description of a tamper-detecting wrapper, as known to attackers.
struct C1Target {
  std::size_t base_len = 0;
  OtsParams ots;
  EccParams ecc;
  BaseCandidates candidates = majority_candidates;

  C1Layout layout() const { return C1Layout(base_len, ots, ecc); }
};

/// Computationally bounded attack on the tamper-detecting wrapper.
///
/// With x already misclassified it returns x. Otherwise it spends up to half
/// the query budget hashing candidate perturbations x' (radius `base_b`) to
/// find one whose digest differs from digest(x) in as few positions as
/// possible, then spends the rest guessing slen-bit preimages for those
/// positions. Any shortfall falls back to returning x unchanged.
inline Attacker bounded_attacker_c1(const C1Target& target, std::uint64_t query_budget, std::size_t base_b,
                                    std::size_t bit_budget) {
  check_wrapper_params(target.ots, target.ecc);
  detail::check_guessable(target.ots);
  const C1Layout layout = target.layout();
  auto codec = reed_solomon_for(target.ecc);
  return {"bounded-c1", AttackerPower::Bounded, query_budget, layout.total(),
          [target, layout, codec, base_b, bit_budget](const BitString& inst, Label y, OracleContext& ctx) -> BitString {
            const OtsParams& p = target.ots;
            const BitString x = layout.x(inst);
            if (ctx.remaining() < 2) return inst;
            auto first = target.candidates(x, y, base_b, 1);
            if (first.empty()) return inst;  // already misclassified, or out of reach
            auto vk = codec->decode(layout.vk_code(inst));
            if (!vk) return inst;

            const BitString d0 = ctx.hash(x, p.hlen, p.hash_rounds);
            const std::uint64_t search_budget = std::max<std::uint64_t>(1, ctx.remaining() / 2);
            auto candidates = target.candidates(x, y, base_b, static_cast<std::size_t>(search_budget));
            std::optional<BitString> best;
            BitString best_digest;
            std::size_t best_diff = p.hlen + 1;
            for (const auto& xp : candidates) {
              if (ctx.remaining() == 0) break;
              BitString dg = ctx.hash(xp, p.hlen, p.hash_rounds);
              std::size_t diff = hamming_distance(dg, d0);
              if (diff < best_diff) {
                best_diff = diff;
                best = xp;
                best_digest = std::move(dg);
                if (diff == 0) break;
              }
            }
            if (!best) return inst;

            BitString sigma = layout.sigma(inst);
            const std::uint64_t init = toy_hash_initial_state(p.slen, p.hash_rounds);
            for (std::size_t i = 0; i < p.hlen; ++i) {
              if (best_digest[i] == d0[i]) continue;
              std::size_t e = 2 * i + (best_digest[i] ? 1 : 0);
              std::uint64_t want = vk->read_bits(e * p.hlen, p.hlen);
              bool found = false;
              while (!found && ctx.remaining() > 0) {
                ctx.charge(1);
                std::uint64_t guess = ctx.rng()() & detail::low_mask(p.slen);
                if (toy_hash_word(init, guess, p.hlen, p.hash_rounds) == want) {
                  sigma.write_bits(i * p.slen, p.slen, guess);
                  found = true;
                }
              }
              if (!found) return inst;
            }
            BitString out = layout.join(*best, sigma, layout.vk_code(inst));
            if (hamming_distance(out, inst) > bit_budget) return inst;
            ctx.note("forged");
            return out;
          }};
}

/// Computationally unbounded attack on the tamper-detecting wrapper: move x
/// to the preferred base candidate within b flips and forge a signature for it
/// by exhaustive preimage search. Total change is at most b + ell bits.
inline Attacker unbounded_attacker_c1(const C1Target& target, std::size_t b) {
  check_wrapper_params(target.ots, target.ecc);
  const C1Layout layout = target.layout();
  auto codec = reed_solomon_for(target.ecc);
  return {"unbounded-c1", AttackerPower::Unbounded, 0, layout.total(),
          [target, layout, codec, b](const BitString& inst, Label y, OracleContext& ctx) -> BitString {
            const BitString x = layout.x(inst);
            auto cands = target.candidates(x, y, b, 1);
            if (cands.empty()) return inst;
            auto vk = codec->decode(layout.vk_code(inst));
            if (!vk) return inst;
            HashCounter counter;
            try {
              BitString sigma = forge_exhaustive(target.ots, *vk, cands.front(), &counter);
              ctx.charge(counter.calls);
              return layout.join(cands.front(), sigma, layout.vk_code(inst));
            } catch (const PreimageNotFound& e) {
              ctx.charge(counter.calls);
              ctx.note(std::string("preimage not found: ") + e.what());
              return inst;
            }
          }};
}

/// Public description of the no-detection wrapper.
struct C3Target {
  OtsParams ots;
  EccParams ecc;

  C3Layout layout() const { return C3Layout(ots, ecc); }
};

/// Unbounded attack without tamper detection: on label 0 forge a valid
/// signature for the decoded (x, vk) and write it into slot 0 (at most ell
/// flips); on label 1 do nothing.
inline Attacker unbounded_attacker_c3(const C3Target& target) {
  check_wrapper_params(target.ots, target.ecc);
  const C3Layout layout = target.layout();
  auto codec = reed_solomon_for(target.ecc);
  return {"unbounded-c3", AttackerPower::Unbounded, 0, layout.total(),
          [target, layout, codec](const BitString& inst, Label y, OracleContext& ctx) -> BitString {
            if (y.value() == 1) return inst;
            auto x = codec->decode(layout.x_code(inst));
            auto vk = codec->decode(layout.vk_code(inst));
            if (!x || !vk) return inst;
            HashCounter counter;
            try {
              BitString sigma = forge_exhaustive(target.ots, *vk, *x, &counter);
              ctx.charge(counter.calls);
              BitString out = inst;
              out.assign(layout.slot_offset(0), sigma);
              return out;
            } catch (const PreimageNotFound& e) {
              ctx.charge(counter.calls);
              ctx.note(std::string("preimage not found: ") + e.what());
              return inst;
            }
          }};
}

/// Bounded attack without tamper detection. Label 0: guess preimages for
/// every digest position within the query budget and plant the result in slot
/// 0. Label 1: flip one bit in each of the first min(bit_budget, slots) slots,
/// which cannot reach every slot while bit_budget < slots.
inline Attacker bounded_attacker_c3(const C3Target& target, std::uint64_t query_budget, std::size_t bit_budget) {
  check_wrapper_params(target.ots, target.ecc);
  detail::check_guessable(target.ots);
  const C3Layout layout = target.layout();
  auto codec = reed_solomon_for(target.ecc);
  return {"bounded-c3", AttackerPower::Bounded, query_budget, layout.total(),
          [target, layout, codec, bit_budget](const BitString& inst, Label y, OracleContext& ctx) -> BitString {
            const OtsParams& p = target.ots;
            if (y.value() == 1) {
              BitString out = inst;
              std::size_t hits = std::min(bit_budget, layout.slots);
              for (std::size_t i = 0; i < hits; ++i) out.flip(layout.slot_offset(i));
              return out;
            }
            if (ctx.remaining() < 2) return inst;
            auto x = codec->decode(layout.x_code(inst));
            auto vk = codec->decode(layout.vk_code(inst));
            if (!x || !vk) return inst;
            BitString dg = ctx.hash(*x, p.hlen, p.hash_rounds);
            BitString sigma(p.signature_len());
            const std::uint64_t init = toy_hash_initial_state(p.slen, p.hash_rounds);
            for (std::size_t i = 0; i < p.hlen; ++i) {
              std::size_t e = 2 * i + (dg[i] ? 1 : 0);
              std::uint64_t want = vk->read_bits(e * p.hlen, p.hlen);
              bool found = false;
              while (!found && ctx.remaining() > 0) {
                ctx.charge(1);
                std::uint64_t guess = ctx.rng()() & detail::low_mask(p.slen);
                if (toy_hash_word(init, guess, p.hlen, p.hash_rounds) == want) {
                  sigma.write_bits(i * p.slen, p.slen, guess);
                  found = true;
                }
              }
              if (!found) return inst;
            }
            BitString out = inst;
            out.assign(layout.slot_offset(0), sigma);
            if (hamming_distance(out, inst) > bit_budget) return inst;
            ctx.note("forged");
            return out;
          }};
}

}  // namespace compgap
