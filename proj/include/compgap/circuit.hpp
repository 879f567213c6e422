#pragma once

// Boolean circuits over {AND, OR, NOT, XOR} and explicit circuit forms of the
// shipped hypotheses.
//
// Wires 0..inputs-1 are the inputs; wire inputs+g is the output of gate g.
// Gates only read earlier wires, so the gate list is a topological order.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"
#include "compgap/game.hpp"
#include "compgap/ots.hpp"
#include "compgap/reed_solomon.hpp"
#include "compgap/toy_hash.hpp"

namespace compgap {

enum class GateKind : std::uint8_t { And, Or, Not, Xor };

struct Gate {
  GateKind kind;
  std::uint32_t a;
  std::uint32_t b;  // ignored for Not
};

struct BoolCircuit {
  std::size_t inputs = 0;
  std::vector<Gate> gates;
  std::vector<std::uint32_t> outputs;

  std::size_t wire_count() const noexcept { return inputs + gates.size(); }

  void validate() const {
    for (std::size_t g = 0; g < gates.size(); ++g) {
      std::size_t self = inputs + g;
      if (gates[g].a >= self || (gates[g].kind != GateKind::Not && gates[g].b >= self)) {
        throw FormatError("gate " + std::to_string(g) + " reads a wire that is not earlier");
      }
    }
    for (auto o : outputs) {
      if (o >= wire_count()) throw FormatError("output refers to a missing wire");
    }
  }

  /// Bit-sliced evaluation: lane bit j of every wire belongs to input vector j.
  std::vector<std::uint64_t> evaluate_lanes(std::span<const std::uint64_t> input_lanes) const {
    if (input_lanes.size() != inputs) throw LengthError("circuit expects one lane word per input");
    std::vector<std::uint64_t> w(wire_count());
    for (std::size_t i = 0; i < inputs; ++i) w[i] = input_lanes[i];
    for (std::size_t g = 0; g < gates.size(); ++g) {
      const Gate& gt = gates[g];
      std::uint64_t a = w[gt.a];
      switch (gt.kind) {
        case GateKind::And: w[inputs + g] = a & w[gt.b]; break;
        case GateKind::Or: w[inputs + g] = a | w[gt.b]; break;
        case GateKind::Not: w[inputs + g] = ~a; break;
        case GateKind::Xor: w[inputs + g] = a ^ w[gt.b]; break;
      }
    }
    std::vector<std::uint64_t> out(outputs.size());
    for (std::size_t o = 0; o < outputs.size(); ++o) out[o] = w[outputs[o]];
    return out;
  }

  BitString evaluate(const BitString& in) const {
    if (in.size() != inputs) throw LengthError("circuit input has the wrong length");
    std::vector<std::uint64_t> lanes(inputs);
    for (std::size_t i = 0; i < inputs; ++i) lanes[i] = in[i] ? 1 : 0;
    auto res = evaluate_lanes(lanes);
    BitString out(outputs.size());
    for (std::size_t o = 0; o < res.size(); ++o) out.set(o, (res[o] & 1U) != 0);
    return out;
  }
};

/// Builds circuits with constant folding and structural hashing. A Wire is a
/// circuit wire index, or one of the constants kFalse / kTrue, which only
/// become gates if they reach an output.
class CircuitBuilder {
 public:
  using Wire = std::int64_t;
  static constexpr Wire kFalse = -1;
  static constexpr Wire kTrue = -2;

  explicit CircuitBuilder(std::size_t inputs) { circuit_.inputs = inputs; }

  Wire input(std::size_t i) const {
    if (i >= circuit_.inputs) throw LengthError("input index out of range");
    return static_cast<Wire>(i);
  }
  static Wire constant(bool v) { return v ? kTrue : kFalse; }
  static bool is_const(Wire w) { return w < 0; }

  Wire not_(Wire a) {
    if (a == kFalse) return kTrue;
    if (a == kTrue) return kFalse;
    if (auto it = negation_.find(a); it != negation_.end()) return it->second;
    Wire g = emit(GateKind::Not, a, a);
    negation_[g] = a;
    negation_[a] = g;
    return g;
  }

  Wire and_(Wire a, Wire b) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue) return a;
    if (a == b) return a;
    if (is_negation(a, b)) return kFalse;
    return emit(GateKind::And, std::min(a, b), std::max(a, b));
  }

  Wire or_(Wire a, Wire b) {
    if (a == kTrue || b == kTrue) return kTrue;
    if (a == kFalse) return b;
    if (b == kFalse) return a;
    if (a == b) return a;
    if (is_negation(a, b)) return kTrue;
    return emit(GateKind::Or, std::min(a, b), std::max(a, b));
  }

  Wire xor_(Wire a, Wire b) {
    if (a == kFalse) return b;
    if (b == kFalse) return a;
    if (a == kTrue) return not_(b);
    if (b == kTrue) return not_(a);
    if (a == b) return kFalse;
    if (is_negation(a, b)) return kTrue;
    return emit(GateKind::Xor, std::min(a, b), std::max(a, b));
  }

  Wire xnor_(Wire a, Wire b) { return not_(xor_(a, b)); }
  Wire mux(Wire sel, Wire if_true, Wire if_false) { return or_(and_(sel, if_true), and_(not_(sel), if_false)); }

  Wire and_all(std::span<const Wire> ws) {
    Wire acc = kTrue;
    for (auto w : ws) acc = and_(acc, w);
    return acc;
  }
  Wire or_all(std::span<const Wire> ws) {
    Wire acc = kFalse;
    for (auto w : ws) acc = or_(acc, w);
    return acc;
  }

  /// 1 iff at least `k` of `ws` are 1 (counting network).
  Wire at_least(std::span<const Wire> ws, std::size_t k) {
    if (k == 0) return kTrue;
    if (k > ws.size()) return kFalse;
    std::vector<Wire> c(k + 1, kFalse);  // c[j]: at least j seen
    c[0] = kTrue;
    for (auto w : ws) {
      for (std::size_t j = k; j >= 1; --j) c[j] = or_(c[j], and_(w, c[j - 1]));
    }
    return c[k];
  }

  /// 1 iff at most `k` of `ws` are 1.
  Wire at_most(std::span<const Wire> ws, std::size_t k) { return not_(at_least(ws, k + 1)); }

  void add_output(Wire w) { pending_outputs_.push_back(w); }

  BoolCircuit finish() {
    BoolCircuit c = circuit_;
    for (auto w : pending_outputs_) {
      if (!is_const(w)) {
        c.outputs.push_back(static_cast<std::uint32_t>(w));
        continue;
      }
      if (c.inputs == 0) throw FormatError("constant output needs at least one input wire");
      // x XOR x = 0, NOT of that = 1
      std::uint32_t zero = static_cast<std::uint32_t>(c.wire_count());
      c.gates.push_back({GateKind::Xor, 0, 0});
      if (w == kFalse) {
        c.outputs.push_back(zero);
      } else {
        c.gates.push_back({GateKind::Not, zero, zero});
        c.outputs.push_back(zero + 1);
      }
    }
    c.validate();
    return c;
  }

  std::size_t gate_count() const noexcept { return circuit_.gates.size(); }

 private:
  bool is_negation(Wire a, Wire b) const {
    auto it = negation_.find(a);
    return it != negation_.end() && it->second == b;
  }

  Wire emit(GateKind kind, Wire a, Wire b) {
    auto key = std::make_tuple(kind, a, b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto idx = static_cast<Wire>(circuit_.wire_count());
    circuit_.gates.push_back({kind, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
    memo_[key] = idx;
    return idx;
  }

  BoolCircuit circuit_;
  std::vector<Wire> pending_outputs_;
  std::map<std::tuple<GateKind, Wire, Wire>, Wire> memo_;
  std::map<Wire, Wire> negation_;
};

/// A hypothesis in circuit form: outputs are the label bits (least
/// significant first) followed, when present, by an is_star bit.
struct HypothesisCircuit {
  BoolCircuit circuit;
  std::size_t label_bits = 1;
  bool has_star = false;

  Label decode_output(const BitString& out) const {
    if (has_star && out[label_bits]) return Label::star();
    int v = 0;
    for (std::size_t i = 0; i < label_bits; ++i) v |= (out[i] ? 1 : 0) << i;
    return Label(v);
  }

  Label classify(const BitString& x) const { return decode_output(circuit.evaluate(x)); }
};

inline constexpr std::size_t kMaxMajorityCircuitInputs = 4096;

/// MAJ over d inputs (d odd) from a counting network: at least (d+1)/2 ones.
inline HypothesisCircuit circuit_of_majority(std::size_t d) {
  if (d % 2 == 0 || d == 0) throw ConfigError("majority circuit needs an odd input count");
  if (d > kMaxMajorityCircuitInputs) throw ConfigError("majority circuit input count exceeds the emission cap");
  CircuitBuilder b(d);
  std::vector<CircuitBuilder::Wire> xs(d);
  for (std::size_t i = 0; i < d; ++i) xs[i] = b.input(i);
  b.add_output(b.at_least(xs, (d + 1) / 2));
  return {b.finish(), 1, false};
}

/// Parity of all inputs as an XOR chain.
inline BoolCircuit circuit_of_parity(std::size_t inputs) {
  CircuitBuilder b(inputs);
  CircuitBuilder::Wire acc = CircuitBuilder::kFalse;
  for (std::size_t i = 0; i < inputs; ++i) acc = b.xor_(acc, b.input(i));
  b.add_output(acc);
  return b.finish();
}

namespace circuit_words {

using Wire = CircuitBuilder::Wire;
using Word = std::array<Wire, 64>;

inline Word constant(std::uint64_t v) {
  Word w;
  for (std::size_t i = 0; i < 64; ++i) w[i] = CircuitBuilder::constant(((v >> i) & 1U) != 0);
  return w;
}

inline Word xor_words(CircuitBuilder& b, const Word& x, const Word& y) {
  Word out;
  for (std::size_t i = 0; i < 64; ++i) out[i] = b.xor_(x[i], y[i]);
  return out;
}

/// v ^ (v >> k)
inline Word xorshift_right(CircuitBuilder& b, const Word& v, unsigned k) {
  Word out = v;
  for (std::size_t i = 0; i + k < 64; ++i) out[i] = b.xor_(v[i], v[i + k]);
  return out;
}

/// Ripple-carry addition mod 2^64.
inline Word add(CircuitBuilder& b, const Word& x, const Word& y) {
  Word out;
  Wire carry = CircuitBuilder::kFalse;
  for (std::size_t i = 0; i < 64; ++i) {
    Wire t = b.xor_(x[i], y[i]);
    out[i] = b.xor_(t, carry);
    if (i + 1 < 64) carry = b.or_(b.and_(x[i], y[i]), b.and_(carry, t));
  }
  return out;
}

/// v * k mod 2^64 by shift-and-add over the set bits of k.
inline Word mul_const(CircuitBuilder& b, const Word& v, std::uint64_t k) {
  Word acc = constant(0);
  for (unsigned s = 0; s < 64; ++s) {
    if (((k >> s) & 1U) == 0) continue;
    Word shifted = constant(0);
    for (std::size_t i = s; i < 64; ++i) shifted[i] = v[i - s];
    acc = add(b, acc, shifted);
  }
  return acc;
}

inline Word mix(CircuitBuilder& b, Word v, std::size_t rounds) {
  using namespace toy_hash_constants;
  for (std::size_t r = 0; r < rounds; ++r) {
    v = xorshift_right(b, v, kShiftA);
    v = mul_const(b, v, kMul);
    v = xorshift_right(b, v, kShiftB);
  }
  return v;
}

}  // namespace circuit_words

/// toy_hash of the given wires (bit i of the input = wires[i]), `out_bits`
/// output wires. Mirrors the software definition block for block.
inline std::vector<CircuitBuilder::Wire> toy_hash_circuit(CircuitBuilder& b,
                                                           std::span<const CircuitBuilder::Wire> wires,
                                                           std::size_t out_bits, std::size_t rounds) {
  using namespace circuit_words;
  Word s = constant(toy_hash_initial_state(wires.size(), rounds));
  for (std::size_t j = 0; 64 * j < wires.size(); ++j) {
    Word w = constant(0);
    for (std::size_t i = 0; i < 64 && 64 * j + i < wires.size(); ++i) w[i] = wires[64 * j + i];
    s = mix(b, xor_words(b, s, w), rounds);
  }
  std::vector<CircuitBuilder::Wire> out;
  for (std::size_t j = 0; 64 * j < out_bits; ++j) {
    Word block = mix(b, xor_words(b, s, constant(toy_hash_constants::kBlock * (j + 1))), rounds);
    for (std::size_t i = 0; i < 64 && 64 * j + i < out_bits; ++i) out.push_back(block[i]);
  }
  return out;
}

inline constexpr std::size_t kMaxCodebookDataBits = 12;

/// Bounded-distance decoder as a codebook circuit: for every message m,
/// near_m = (number of symbols differing from Encode(m)) <= t_max. Returns
/// (ok, data wires); ok = OR of near_m, data bit i = OR of (near_m AND m_i).
/// At most one near_m can hold because the minimum distance exceeds 2 t_max.
inline std::pair<CircuitBuilder::Wire, std::vector<CircuitBuilder::Wire>> codebook_decoder_circuit(
    CircuitBuilder& b, const EccParams& ecc, std::span<const CircuitBuilder::Wire> code) {
  using Wire = CircuitBuilder::Wire;
  if (ecc.data_bits() > kMaxCodebookDataBits) {
    throw ConfigError("codebook decoder circuit supports at most " + std::to_string(kMaxCodebookDataBits) + " data bits");
  }
  auto codec = reed_solomon_for(ecc);
  const std::size_t m = static_cast<std::size_t>(ecc.bits_per_symbol);
  std::vector<Wire> data(ecc.data_bits(), CircuitBuilder::kFalse);
  Wire ok = CircuitBuilder::kFalse;
  for (std::uint64_t msg = 0; msg < (std::uint64_t{1} << ecc.data_bits()); ++msg) {
    BitString word = codec->encode(BitString::from_uint(msg, ecc.data_bits()));
    std::vector<Wire> symbol_bad(ecc.n_sym);
    for (std::size_t j = 0; j < ecc.n_sym; ++j) {
      std::vector<Wire> diff(m);
      for (std::size_t t = 0; t < m; ++t) {
        Wire w = code[j * m + t];
        diff[t] = word[j * m + t] ? b.not_(w) : w;
      }
      symbol_bad[j] = b.or_all(diff);
    }
    Wire near = b.at_most(symbol_bad, ecc.t_max());
    ok = b.or_(ok, near);
    for (std::size_t i = 0; i < ecc.data_bits(); ++i) {
      if (((msg >> i) & 1U) != 0) data[i] = b.or_(data[i], near);
    }
  }
  return {ok, data};
}

/// Circuit form of the tamper-detecting classifier over (x, sigma, [vk]) with
/// a MAJ base hypothesis. Outputs (label, is_star). Only tiny parameters are
/// emittable: the decoder is a codebook over all 2^|vk| keys.
inline HypothesisCircuit circuit_of_classifier_c1(std::size_t d, const OtsParams& ots, const EccParams& ecc) {
  using Wire = CircuitBuilder::Wire;
  ots.validate();
  ecc.validate();
  if (ecc.data_bits() != ots.vk_len()) throw ConfigError("ecc data width must equal the verification key length");
  const std::size_t ell = ots.signature_len();
  const std::size_t n = ecc.code_bits();
  CircuitBuilder b(d + ell + n);
  std::vector<Wire> x(d), sig(ell), code(n);
  for (std::size_t i = 0; i < d; ++i) x[i] = b.input(i);
  for (std::size_t i = 0; i < ell; ++i) sig[i] = b.input(d + i);
  for (std::size_t i = 0; i < n; ++i) code[i] = b.input(d + ell + i);

  auto [decoded_ok, vk] = codebook_decoder_circuit(b, ecc, code);
  auto digest = toy_hash_circuit(b, x, ots.hlen, ots.hash_rounds);
  std::vector<Wire> checks{decoded_ok};
  for (std::size_t i = 0; i < ots.hlen; ++i) {
    std::span<const Wire> pre(sig.data() + i * ots.slen, ots.slen);
    auto hashed = toy_hash_circuit(b, pre, ots.hlen, ots.hash_rounds);
    for (std::size_t t = 0; t < ots.hlen; ++t) {
      Wire want = b.mux(digest[i], vk[(2 * i + 1) * ots.hlen + t], vk[(2 * i) * ots.hlen + t]);
      checks.push_back(b.xnor_(hashed[t], want));
    }
  }
  Wire valid = b.and_all(checks);
  Wire label = b.at_least(x, (d + 1) / 2);
  b.add_output(label);
  b.add_output(b.not_(valid));
  return {b.finish(), 1, true};
}

}  // namespace compgap
