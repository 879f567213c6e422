#pragma once

// Formula samplers built from adversarial-example search.
//
//   S1: draw (x, y), emit phi satisfiable iff some x' within distance b of x
//       has h(x') != y and h(x') is not STAR.
//   S2: k independent S1 blocks on disjoint variables, selector s_j -> phi_j,
//       and at least ceil(tau * k) selectors true.
//   S:  `reps` independent S2 formulas, all required.
//
// Sub-instance j of a composed sampler with seed s uses seed mix_seed(s, j).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/circuit.hpp"
#include "compgap/cnf.hpp"
#include "compgap/errors.hpp"
#include "compgap/game.hpp"
#include "compgap/random.hpp"
#include "compgap/solver.hpp"

namespace compgap {

enum class SamplerStage { S1, S2, S };

inline const char* to_string(SamplerStage s) {
  switch (s) {
    case SamplerStage::S1: return "S1";
    case SamplerStage::S2: return "S2";
    case SamplerStage::S: return "S";
  }
  return "?";
}

/// One embedded S1 formula: its sample, and where its variables live.
struct BlockInfo {
  std::uint64_t seed = 0;
  BitString x;
  Label y;
  std::vector<int> input_vars;
  int selector = 0;  // 0 when the block is unconditional
  int first_var = 0;
  int last_var = 0;
};

struct Witness {
  std::size_t block = 0;
  BitString x;
  BitString x_prime;
  Label y;
};

struct SamplerBundle {
  CnfFormula formula;
  SamplerStage stage = SamplerStage::S1;
  std::uint64_t seed = 0;
  std::size_t b = 0;
  std::size_t k = 1;
  double tau = 1.0;
  std::size_t reps = 1;
  std::vector<BlockInfo> blocks;

  /// x' for every block whose selector is on (every block when unconditional).
  std::vector<Witness> decode_witness(const std::vector<bool>& assignment) const {
    if (assignment.size() != static_cast<std::size_t>(formula.num_vars) + 1) {
      throw LengthError("assignment must cover every variable");
    }
    std::vector<Witness> out;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const auto& blk = blocks[j];
      if (blk.selector != 0 && !assignment[static_cast<std::size_t>(blk.selector)]) continue;
      BitString xp(blk.input_vars.size());
      for (std::size_t i = 0; i < xp.size(); ++i) xp.set(i, assignment[static_cast<std::size_t>(blk.input_vars[i])]);
      out.push_back({j, blk.x, std::move(xp), blk.y});
    }
    return out;
  }
};

/// Checks a decoded witness against the circuit: within the ball, label
/// differs from y, not STAR.
inline bool witness_valid(const HypothesisCircuit& h, const Witness& w, std::size_t b) {
  if (w.x.size() != w.x_prime.size()) return false;
  if (hamming_distance(w.x, w.x_prime) > b) return false;
  Label got = h.classify(w.x_prime);
  return !got.is_star() && got != w.y;
}

namespace detail {

inline void check_circuit_for(const Problem& problem, const HypothesisCircuit& h) {
  if (h.circuit.inputs != problem.instance_len()) {
    throw ConfigError("hypothesis circuit reads " + std::to_string(h.circuit.inputs) + " bits but instances have " +
                      std::to_string(problem.instance_len()));
  }
  if (h.circuit.outputs.size() != h.label_bits + (h.has_star ? 1 : 0)) {
    throw ConfigError("hypothesis circuit output count does not match its label encoding");
  }
}

// Appends the S1 formula for (x, y) to f on fresh variables. With a nonzero
// selector the block reads s -> phi: the gate, flip and counter definitions
// stay unconditional (they are functional in the inputs), the label clauses
// are weakened by -s, and -s pins the inputs to x so a disabled block leaves
// no free variables for the search.
inline BlockInfo append_s1_block(CnfFormula& f, const HypothesisCircuit& h, const Sample& s, std::size_t b,
                                 std::uint64_t seed, int selector) {
  BlockInfo info{seed, s.x, s.y, {}, selector, f.num_vars + 1, 0};
  CnfFormula local = tseitin(h.circuit);
  std::vector<int> inputs = local.annotations["input"];
  std::vector<int> outputs = local.annotations["output"];
  encode_hamming_ball(local, s.x, b, inputs);
  const std::size_t definitions = local.clauses.size();
  // label(x') != y
  Clause differ;
  for (std::size_t i = 0; i < h.label_bits; ++i) {
    bool yi = ((s.y.value() >> i) & 1) != 0;
    differ.push_back(yi ? -outputs[i] : outputs[i]);
  }
  local.add_clause(differ);
  if (h.has_star) local.add_clause({-outputs[h.label_bits]});

  const int offset = f.num_vars;
  auto shift = [offset](Lit l) { return l > 0 ? l + offset : l - offset; };
  f.num_vars += local.num_vars;
  for (std::size_t ci = 0; ci < local.clauses.size(); ++ci) {
    Clause shifted;
    shifted.reserve(local.clauses[ci].size() + 1);
    if (selector != 0 && ci >= definitions) shifted.push_back(-selector);
    for (Lit l : local.clauses[ci]) shifted.push_back(shift(l));
    f.add_clause(std::move(shifted));
  }
  for (int v : inputs) info.input_vars.push_back(v + offset);
  if (selector != 0) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      int v = info.input_vars[i];
      f.add_clause({selector, s.x[i] ? v : -v});
    }
  }
  auto& ann = f.annotations["input"];
  ann.insert(ann.end(), info.input_vars.begin(), info.input_vars.end());
  auto& flips = f.annotations["flip"];
  for (int v : local.annotations["flip"]) flips.push_back(v + offset);
  info.last_var = f.num_vars;
  return info;
}

inline std::size_t required_selectors(double tau, std::size_t k) {
  return static_cast<std::size_t>(std::ceil(tau * static_cast<double>(k) - 1e-9));
}

inline void append_s2(SamplerBundle& bundle, const Problem& problem, const HypothesisCircuit& h, std::size_t b,
                      std::size_t k, double tau, std::uint64_t seed) {
  if (k < 1) throw ConfigError("S2 needs k >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("S2 needs 0 < tau <= 1");
  std::vector<Lit> selectors;
  for (std::size_t j = 0; j < k; ++j) {
    std::uint64_t sj = mix_seed(seed, j);
    int sel = bundle.formula.new_var();
    selectors.push_back(sel);
    bundle.formula.annotations["selector"].push_back(sel);
    bundle.blocks.push_back(append_s1_block(bundle.formula, h, problem.sample(sj), b, sj, sel));
    bundle.blocks.back().first_var = sel;
  }
  encode_at_least(bundle.formula, selectors, required_selectors(tau, k));
}

}  // namespace detail

inline SamplerBundle sample_s1(const Problem& problem, const HypothesisCircuit& h, std::size_t b, std::uint64_t seed) {
  detail::check_circuit_for(problem, h);
  SamplerBundle bundle;
  bundle.stage = SamplerStage::S1;
  bundle.seed = seed;
  bundle.b = b;
  bundle.blocks.push_back(detail::append_s1_block(bundle.formula, h, problem.sample(seed), b, seed, 0));
  bundle.formula.validate();
  return bundle;
}

inline SamplerBundle sample_s2(const Problem& problem, const HypothesisCircuit& h, std::size_t b, std::size_t k,
                               double tau, std::uint64_t seed) {
  detail::check_circuit_for(problem, h);
  SamplerBundle bundle;
  bundle.stage = SamplerStage::S2;
  bundle.seed = seed;
  bundle.b = b;
  bundle.k = k;
  bundle.tau = tau;
  detail::append_s2(bundle, problem, h, b, k, tau, seed);
  bundle.formula.validate();
  return bundle;
}

inline SamplerBundle sample_s_final(const Problem& problem, const HypothesisCircuit& h, std::size_t b, std::size_t k,
                                    double tau, std::size_t reps, std::uint64_t seed) {
  detail::check_circuit_for(problem, h);
  if (reps < 1) throw ConfigError("S needs reps >= 1");
  SamplerBundle bundle;
  bundle.stage = SamplerStage::S;
  bundle.seed = seed;
  bundle.b = b;
  bundle.k = k;
  bundle.tau = tau;
  bundle.reps = reps;
  for (std::size_t r = 0; r < reps; ++r) detail::append_s2(bundle, problem, h, b, k, tau, mix_seed(seed, r));
  bundle.formula.validate();
  return bundle;
}

/// Threshold halfway between the clean error rate and the adversarial one.
inline double midway_tau(double alpha, double beta) {
  if (!(beta > alpha)) throw ConfigError("midway tau needs beta > alpha");
  return (alpha + beta) / 2.0;
}

/// Planting demonstration: build an S2 formula whose slot i (uniform in [k])
/// is the S1 formula drawn from `planted_seed` and whose other slots are
/// fresh, solve it, and record whether the solution's slot i carries a valid
/// witness for the planted formula. Only solve rates are reported.
struct PlantReport {
  std::size_t trials = 0;
  std::size_t solved = 0;          // S2 formula satisfiable
  std::size_t planted_solved = 0;  // selector i on and its x' valid
  std::vector<std::size_t> slot_hits;
  std::vector<std::size_t> slot_solved;
};

inline PlantReport plant_and_solve(const Problem& problem, const HypothesisCircuit& h, std::size_t b, std::size_t k,
                                   double tau, std::size_t trials, std::uint64_t seed, SolverLimits limits = {}) {
  detail::check_circuit_for(problem, h);
  PlantReport rep;
  rep.slot_hits.assign(k, 0);
  rep.slot_solved.assign(k, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t ts = mix_seed(seed, t);
    Rng rng(ts);
    std::size_t slot = static_cast<std::size_t>(uniform_below(rng, k));
    std::uint64_t planted_seed = mix_seed(ts, 0x706C616EULL);
    SamplerBundle bundle;
    bundle.stage = SamplerStage::S2;
    bundle.seed = ts;
    bundle.b = b;
    bundle.k = k;
    bundle.tau = tau;
    std::vector<Lit> selectors;
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t sj = j == slot ? planted_seed : mix_seed(ts, j);
      int sel = bundle.formula.new_var();
      selectors.push_back(sel);
      bundle.blocks.push_back(detail::append_s1_block(bundle.formula, h, problem.sample(sj), b, sj, sel));
    }
    encode_at_least(bundle.formula, selectors, detail::required_selectors(tau, k));
    ++rep.trials;
    ++rep.slot_hits[slot];
    auto res = solve_small(bundle.formula, {}, limits);
    if (!res.sat()) continue;
    ++rep.solved;
    for (const auto& w : bundle.decode_witness(res.assignment)) {
      if (w.block == slot && witness_valid(h, w, b)) {
        ++rep.planted_solved;
        ++rep.slot_solved[slot];
      }
    }
  }
  return rep;
}

/// One line of the batch manifest.
struct ManifestEntry {
  std::string file;
  SamplerStage stage = SamplerStage::S1;
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::size_t b = 0;
  std::size_t k = 1;
  double tau = 1.0;
};

/// "<file> stage=<S1|S2|S> seed=<u64> d=<n> b=<n> k=<n> tau=<decimal>"
inline void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries) {
  for (const auto& e : entries) {
    char tau[32];
    std::snprintf(tau, sizeof tau, "%.6f", e.tau);
    out << e.file << " stage=" << to_string(e.stage) << " seed=" << e.seed << " d=" << e.d << " b=" << e.b
        << " k=" << e.k << " tau=" << tau << '\n';
  }
}

}  // namespace compgap
