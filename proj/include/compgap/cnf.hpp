#pragma once

// CNF formulas, the gate-by-gate circuit encoding, cardinality constraints and
// DIMACS I/O.
//
// Literals are DIMACS style: variable v is +v, its negation -v, v >= 1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/circuit.hpp"
#include "compgap/errors.hpp"

namespace compgap {

using Lit = int;
using Clause = std::vector<Lit>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  /// Role name -> variables, e.g. "input", "output", "flip".
  std::map<std::string, std::vector<int>> annotations;

  int new_var() { return ++num_vars; }

  void add_clause(Clause c) {
    if (c.empty()) throw FormatError("empty clause at emission");
    for (Lit l : c) {
      if (l == 0 || std::abs(l) > num_vars) {
        throw FormatError("literal " + std::to_string(l) + " outside 1.." + std::to_string(num_vars));
      }
    }
    clauses.push_back(std::move(c));
  }

  /// Adds `c` after dropping repeated literals; tautologies are skipped.
  void add_normalized(Clause c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (Lit l : c) {
      if (std::binary_search(c.begin(), c.end(), -l)) return;
    }
    add_clause(std::move(c));
  }

  /// Forces unsatisfiability without an empty clause.
  void add_contradiction() {
    int v = new_var();
    add_clause({v});
    add_clause({-v});
  }

  void validate() const {
    for (const auto& c : clauses) {
      if (c.empty()) throw FormatError("empty clause");
      for (Lit l : c) {
        if (l == 0 || std::abs(l) > num_vars) throw FormatError("literal out of range");
      }
    }
    for (const auto& [role, vars] : annotations) {
      for (int v : vars) {
        if (v < 1 || v > num_vars) throw FormatError("annotation " + role + " names a missing variable");
      }
    }
  }

  bool satisfied_by(const std::vector<bool>& assignment) const {
    for (const auto& c : clauses) {
      bool sat = false;
      for (Lit l : c) {
        if (assignment.at(static_cast<std::size_t>(std::abs(l))) == (l > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Variable of circuit wire w under tseitin(): input i is i+1, gate g is inputs+g+1.
inline int tseitin_var(std::size_t wire) { return static_cast<int>(wire) + 1; }

/// One variable per input and per gate; the circuit output variables are
/// listed under "output", inputs under "input". No output value is asserted.
inline CnfFormula tseitin(const BoolCircuit& circuit) {
  circuit.validate();
  CnfFormula f;
  f.num_vars = static_cast<int>(circuit.wire_count());
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const Gate& gt = circuit.gates[g];
    int o = tseitin_var(circuit.inputs + g);
    int a = tseitin_var(gt.a);
    int b = tseitin_var(gt.b);
    switch (gt.kind) {
      case GateKind::And:
        f.add_normalized({-o, a});
        f.add_normalized({-o, b});
        f.add_normalized({o, -a, -b});
        break;
      case GateKind::Or:
        f.add_normalized({o, -a});
        f.add_normalized({o, -b});
        f.add_normalized({-o, a, b});
        break;
      case GateKind::Not:
        f.add_normalized({o, a});
        f.add_normalized({-o, -a});
        break;
      case GateKind::Xor:
        f.add_normalized({-o, a, b});
        f.add_normalized({-o, -a, -b});
        f.add_normalized({o, -a, b});
        f.add_normalized({o, a, -b});
        break;
    }
  }
  auto& in = f.annotations["input"];
  for (std::size_t i = 0; i < circuit.inputs; ++i) in.push_back(tseitin_var(i));
  auto& out = f.annotations["output"];
  for (auto w : circuit.outputs) out.push_back(tseitin_var(w));
  return f;
}

/// Sequential counter: at most k of `lits` are true. Adds (n-1)*k register variables.
inline void encode_at_most(CnfFormula& f, const std::vector<Lit>& lits, std::size_t k) {
  const std::size_t n = lits.size();
  if (k >= n) return;
  if (k == 0) {
    for (Lit l : lits) f.add_clause({-l});
    return;
  }
  // r[i][j] <-> at least j+1 of lits[0..i] are true. Both directions are
  // encoded so registers never become decision variables.
  std::vector<std::vector<int>> r(n - 1, std::vector<int>(k));
  for (auto& row : r)
    for (auto& v : row) v = f.new_var();
  f.add_clause({-lits[0], r[0][0]});
  f.add_clause({lits[0], -r[0][0]});
  for (std::size_t j = 1; j < k; ++j) f.add_clause({-r[0][j]});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    f.add_clause({-lits[i], r[i][0]});
    f.add_clause({-r[i - 1][0], r[i][0]});
    f.add_clause({-r[i][0], r[i - 1][0], lits[i]});
    for (std::size_t j = 1; j < k; ++j) {
      f.add_clause({-lits[i], -r[i - 1][j - 1], r[i][j]});
      f.add_clause({-r[i - 1][j], r[i][j]});
      f.add_clause({-r[i][j], r[i - 1][j], lits[i]});
      f.add_clause({-r[i][j], r[i - 1][j], r[i - 1][j - 1]});
    }
    f.add_clause({-lits[i], -r[i - 1][k - 1]});
  }
  f.add_clause({-lits[n - 1], -r[n - 2][k - 1]});
}

/// At least k of `lits` are true, as at most n-k of their negations.
inline void encode_at_least(CnfFormula& f, const std::vector<Lit>& lits, std::size_t k) {
  if (k == 0) return;
  if (k > lits.size()) {
    f.add_contradiction();
    return;
  }
  std::vector<Lit> neg(lits.size());
  std::transform(lits.begin(), lits.end(), neg.begin(), [](Lit l) { return -l; });
  encode_at_most(f, neg, lits.size() - k);
}

/// Constrains the assignment of `vars` to lie within Hamming distance b of
/// `center`. Flip indicators f_i <-> (vars_i != center_i) are appended to
/// the "flip" annotation and returned.
inline std::vector<int> encode_hamming_ball(CnfFormula& f, const BitString& center, std::size_t b,
                                            const std::vector<int>& vars) {
  if (vars.size() != center.size()) throw LengthError("one variable per center bit is required");
  std::vector<int> flips(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    int fi = f.new_var();
    Lit x = center[i] ? -vars[i] : vars[i];  // true iff bit i differs from the center
    f.add_clause({-fi, x});
    f.add_clause({fi, -x});
    flips[i] = fi;
  }
  encode_at_most(f, flips, b);
  auto& ann = f.annotations["flip"];
  ann.insert(ann.end(), flips.begin(), flips.end());
  return flips;
}

/// Header "p cnf N M", then one clause per line terminated by 0. Annotations
/// come first as "c role <name> <vars...>" lines.
inline void write_dimacs(const CnfFormula& f, std::ostream& out) {
  for (const auto& [role, vars] : f.annotations) {
    out << "c role " << role;
    for (int v : vars) out << ' ' << v;
    out << '\n';
  }
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
}

inline std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  write_dimacs(f, os);
  return os.str();
}

inline CnfFormula read_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  bool have_header = false;
  std::size_t expected = 0;
  std::size_t line_no = 0;
  Clause current;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") {
      std::string kind, role;
      if (ls >> kind && kind == "role" && ls >> role) {
        auto& vars = f.annotations[role];
        int v = 0;
        while (ls >> v) vars.push_back(v);
      }
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      long long nv = -1, nc = -1;
      if (have_header || !(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0) {
        throw FormatError("bad DIMACS header on line " + std::to_string(line_no));
      }
      f.num_vars = static_cast<int>(nv);
      expected = static_cast<std::size_t>(nc);
      have_header = true;
      continue;
    }
    if (!have_header) throw FormatError("clause before DIMACS header on line " + std::to_string(line_no));
    ls.clear();
    ls.seekg(0);
    long long l = 0;
    while (ls >> l) {
      if (l == 0) {
        if (current.empty()) throw FormatError("empty clause on line " + std::to_string(line_no));
        f.add_clause(std::move(current));
        current.clear();
      } else {
        current.push_back(static_cast<Lit>(l));
      }
    }
    if (!ls.eof()) throw FormatError("bad literal on line " + std::to_string(line_no));
  }
  if (!have_header) throw FormatError("missing DIMACS header");
  if (!current.empty()) throw FormatError("last clause is not terminated by 0");
  if (f.clauses.size() != expected) {
    throw FormatError("header announces " + std::to_string(expected) + " clauses, found " +
                      std::to_string(f.clauses.size()));
  }
  f.validate();
  return f;
}

inline CnfFormula from_dimacs(const std::string& text) {
  std::istringstream is(text);
  return read_dimacs(is);
}

}  // namespace compgap
