#pragma once

// A small DPLL solver: two watched literals, unit propagation, decisions on
// the lowest unassigned variable with the positive phase first, chronological
// backtracking. No clause learning. Plus an enumeration solver for tiny
// formulas that serves as its cross-check.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <vector>

#include "compgap/cnf.hpp"
#include "compgap/errors.hpp"

namespace compgap {

enum class SolveStatus { Sat, Unsat, CapExceeded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::CapExceeded: return "CAP_EXCEEDED";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::vector<bool> assignment;  // index 1..num_vars when Sat
  std::uint64_t decisions = 0;

  bool sat() const noexcept { return status == SolveStatus::Sat; }
};

struct SolverLimits {
  int var_cap = 4000;
  std::uint64_t decision_cap = 50'000'000;
};

namespace detail {

class Dpll {
 public:
  Dpll(const CnfFormula& f, std::uint64_t decision_cap)
      : n_(f.num_vars), value_(static_cast<std::size_t>(n_) + 1, 0), watches_(2 * (static_cast<std::size_t>(n_) + 1)),
        decision_cap_(decision_cap) {
    clauses_.reserve(f.clauses.size());
    for (const auto& c : f.clauses) {
      if (c.empty()) {
        trivially_unsat_ = true;
        continue;
      }
      Clause norm = c;
      std::sort(norm.begin(), norm.end());
      norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
      bool taut = false;
      for (Lit l : norm) taut = taut || std::binary_search(norm.begin(), norm.end(), -l);
      if (taut) continue;
      if (norm.size() == 1) {
        units_.push_back(norm[0]);
        continue;
      }
      std::size_t idx = clauses_.size();
      clauses_.push_back(std::move(norm));
      watches_[slot(clauses_[idx][0])].push_back(idx);
      watches_[slot(clauses_[idx][1])].push_back(idx);
    }
  }

  SolveResult run(const std::vector<Lit>& assumptions) {
    SolveResult res;
    if (trivially_unsat_) return res;
    for (Lit l : units_)
      if (!enqueue(l)) return res;
    for (Lit l : assumptions) {
      if (l == 0 || std::abs(l) > n_) throw FormatError("assumption literal out of range");
      if (!enqueue(l)) return res;
    }
    if (!propagate()) return res;
    int next = 1;
    for (;;) {
      while (next <= n_ && value_[static_cast<std::size_t>(next)] != 0) ++next;
      if (next > n_) {
        res.status = SolveStatus::Sat;
        res.assignment.assign(static_cast<std::size_t>(n_) + 1, false);
        for (int v = 1; v <= n_; ++v) res.assignment[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] > 0;
        res.decisions = decisions_;
        return res;
      }
      if (++decisions_ > decision_cap_) {
        res.status = SolveStatus::CapExceeded;
        res.decisions = decisions_;
        return res;
      }
      levels_.push_back({trail_.size(), next, false});
      enqueue(next);
      while (!propagate()) {
        // flip the most recent decision that still has an untried branch
        while (!levels_.empty() && levels_.back().flipped) {
          undo_to(levels_.back().trail_size, next);
          levels_.pop_back();
        }
        if (levels_.empty()) {
          res.decisions = decisions_;
          return res;
        }
        Level& top = levels_.back();
        undo_to(top.trail_size, next);
        top.flipped = true;
        enqueue(-top.var);
      }
    }
  }

 private:
  struct Level {
    std::size_t trail_size;
    int var;
    bool flipped;
  };

  static std::size_t slot(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }
  int lit_value(Lit l) const {
    int v = value_[static_cast<std::size_t>(std::abs(l))];
    return l > 0 ? v : -v;
  }

  bool enqueue(Lit l) {
    int v = lit_value(l);
    if (v > 0) return true;
    if (v < 0) return false;
    value_[static_cast<std::size_t>(std::abs(l))] = l > 0 ? 1 : -1;
    trail_.push_back(l);
    return true;
  }

  void undo_to(std::size_t size, int& next) {
    while (trail_.size() > size) {
      int v = std::abs(trail_.back());
      value_[static_cast<std::size_t>(v)] = 0;
      if (v < next) next = v;
      trail_.pop_back();
    }
    head_ = std::min(head_, trail_.size());
  }

  // Returns false on conflict.
  bool propagate() {
    while (head_ < trail_.size()) {
      Lit falsified = -trail_[head_++];
      auto& ws = watches_[slot(falsified)];
      std::size_t keep = 0;
      for (std::size_t w = 0; w < ws.size(); ++w) {
        std::size_t ci = ws[w];
        Clause& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) > 0) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[slot(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(c[0])) {
          for (std::size_t r = w + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          head_ = trail_.size();
          return false;
        }
      }
      ws.resize(keep);
    }
    return true;
  }

  int n_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<Clause> clauses_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::vector<Level> levels_;
  std::size_t head_ = 0;
  std::uint64_t decisions_ = 0;
  std::uint64_t decision_cap_;
  bool trivially_unsat_ = false;
};

}  // namespace detail

/// Sound and complete within the limits; CapExceeded when the formula has
/// more than var_cap variables or the search runs past decision_cap.
inline SolveResult solve_small(const CnfFormula& f, const std::vector<Lit>& assumptions = {},
                               SolverLimits limits = {}) {
  if (f.num_vars > limits.var_cap) return {SolveStatus::CapExceeded, {}, 0};
  detail::Dpll dpll(f, limits.decision_cap);
  return dpll.run(assumptions);
}

inline constexpr int kExhaustiveVarCap = 24;

namespace detail {

struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

inline std::vector<MaskClause> mask_clauses(const CnfFormula& f) {
  if (f.num_vars > kExhaustiveVarCap) throw ConfigError("enumeration is capped at 24 variables");
  std::vector<MaskClause> out;
  for (const auto& c : f.clauses) {
    MaskClause m;
    for (Lit l : c) (l > 0 ? m.pos : m.neg) |= std::uint32_t{1} << (std::abs(l) - 1);
    out.push_back(m);
  }
  return out;
}

inline bool mask_sat(const std::vector<MaskClause>& cs, std::uint32_t a) {
  for (const auto& m : cs)
    if (((a & m.pos) | (~a & m.neg)) == 0) return false;
  return true;
}

}  // namespace detail

/// Tries every assignment in increasing binary order (variable 1 is bit 0).
inline SolveResult solve_exhaustive(const CnfFormula& f) {
  auto cs = detail::mask_clauses(f);
  for (const auto& c : f.clauses)
    if (c.empty()) return {};
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (detail::mask_sat(cs, static_cast<std::uint32_t>(a))) {
      SolveResult r{SolveStatus::Sat, std::vector<bool>(static_cast<std::size_t>(f.num_vars) + 1), a};
      for (int v = 1; v <= f.num_vars; ++v) r.assignment[static_cast<std::size_t>(v)] = ((a >> (v - 1)) & 1U) != 0;
      return r;
    }
  }
  return {};
}

inline std::uint64_t count_models_exhaustive(const CnfFormula& f) {
  auto cs = detail::mask_clauses(f);
  for (const auto& c : f.clauses)
    if (c.empty()) return 0;
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) count += detail::mask_sat(cs, static_cast<std::uint32_t>(a)) ? 1 : 0;
  return count;
}

/// Number of assignments to `vars` that extend to a model, by enumerating
/// those assignments and asking solve_small for each.
inline std::uint64_t count_projected_models(const CnfFormula& f, const std::vector<int>& vars,
                                             SolverLimits limits = {}) {
  if (vars.size() > 24) throw ConfigError("projected counting is capped at 24 variables");
  std::uint64_t count = 0;
  std::vector<Lit> assume(vars.size());
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
    for (std::size_t i = 0; i < vars.size(); ++i) assume[i] = ((a >> i) & 1U) != 0 ? vars[i] : -vars[i];
    auto r = solve_small(f, assume, limits);
    if (r.status == SolveStatus::CapExceeded) throw InvariantViolation("projected count hit the solver cap");
    count += r.sat() ? 1 : 0;
  }
  return count;
}

}  // namespace compgap
