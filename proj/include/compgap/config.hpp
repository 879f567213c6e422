#pragma once

// Experiment configuration: a line-oriented `key = value` file.
//
//   # comment (also allowed after a value)
//   experiment = separation
//   problem.d = 15
//   problem.alpha = 0.05
//
// Keys are dotted paths, values are integers, decimals or bare words. Every
// key is optional; unknown keys and malformed values are errors that name the
// line.

#include <cstddef>
#include <cstdint>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "compgap/base_problems.hpp"
#include "compgap/errors.hpp"
#include "compgap/ots.hpp"
#include "compgap/reed_solomon.hpp"

namespace compgap {

struct ExperimentConfig {
  std::string experiment = "separation";  // risk | adv-risk | separation | c3 | np-forge | oracle-check
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  std::string out = "results";

  MajorityNoise problem{};
  std::size_t b = 2;

  OtsParams ots{};
  EccParams ecc{};

  std::string attacker = "default";  // default | identity | greedy | exhaustive
  std::uint64_t query_budget = 1024;
  std::size_t bit_budget = 0;  // 0: b + signature length for the wrapper, t_max for c3

  std::string np_stage = "S1";  // S1 | S2 | S
  std::size_t np_k = 40;
  double np_tau = 0.0;  // 0: midway between alpha and the analytic adversarial risk
  std::size_t np_reps = 1;
  int np_var_cap = 4000;
  std::size_t np_emit = 10;  // formulas written as .cnf files

  /// Effective budget of the attack on the tamper-detecting wrapper.
  std::size_t separation_budget() const { return bit_budget != 0 ? bit_budget : b + ots.signature_len(); }
  std::size_t c3_budget() const { return bit_budget != 0 ? bit_budget : ecc.t_max(); }

  /// Throws ConfigError naming the first violated precondition.
  void validate() const {
    static const char* kinds[] = {"risk", "adv-risk", "separation", "c3", "np-forge", "oracle-check"};
    bool known = false;
    for (auto* k : kinds) known = known || experiment == k;
    if (!known) throw ConfigError("unknown experiment '" + experiment + "'");
    if (trials == 0) throw ConfigError("trials must be at least 1");
    problem.validate();
    if (b > problem.d) throw ConfigError("problem.b must not exceed problem.d");
    ots.validate();
    ecc.validate();
    if (experiment == "separation" || experiment == "c3" || experiment == "risk") {
      if (ecc.data_bits() != ots.vk_len()) {
        throw ConfigError("ecc data width (" + std::to_string(ecc.data_bits()) +
                          " bits) must equal the verification key length (" + std::to_string(ots.vk_len()) + " bits)");
      }
    }
    if (experiment == "separation") {
      if (separation_budget() > ecc.t_max()) {
        throw ConfigError("separation needs b + signature length (" + std::to_string(separation_budget()) +
                          ") <= t_max (" + std::to_string(ecc.t_max()) + ")");
      }
      if (ots.slen > kForgeSlenCap) throw ConfigError("ots.slen exceeds the exhaustive forging cap");
      if (ots.slen > 64 || ots.hlen > 64) throw ConfigError("the bounded attacker needs hlen, slen <= 64");
    }
    if (experiment == "c3") {
      if (ots.slen > kForgeSlenCap) throw ConfigError("ots.slen exceeds the exhaustive forging cap");
      if (ots.slen > 64 || ots.hlen > 64) throw ConfigError("the bounded attacker needs hlen, slen <= 64");
    }
    if (attacker != "default" && attacker != "identity" && attacker != "greedy" && attacker != "exhaustive") {
      throw ConfigError("unknown attacker.kind '" + attacker + "'");
    }
    if (experiment == "adv-risk" && attacker == "exhaustive" && problem.d > 20) {
      throw ConfigError("the exhaustive attacker supports problem.d <= 20");
    }
    if (np_stage != "S1" && np_stage != "S2" && np_stage != "S") throw ConfigError("np.stage must be S1, S2 or S");
    if (np_k == 0) throw ConfigError("np.k must be at least 1");
    if (np_reps == 0) throw ConfigError("np.reps must be at least 1");
    if (!(np_tau >= 0.0 && np_tau <= 1.0)) throw ConfigError("np.tau must lie in [0, 1] (0 selects midway)");
    if (np_var_cap < 1) throw ConfigError("np.var_cap must be positive");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_unsigned(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) + " expects a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

inline double parse_decimal(std::string_view v, std::size_t line, std::string_view key) {
  std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) + " expects a decimal, got '" + s + "'");
  }
  return out;
}

inline std::string parse_word(std::string_view v, std::size_t line, std::string_view key) {
  if (v.empty() || v.find_first_of(" \t") != std::string_view::npos) {
    throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) + " expects a bare word");
  }
  return std::string(v);
}

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
  using Setter = std::function<void(ExperimentConfig&, std::string_view, std::size_t, std::string_view)>;
  auto u64 = [](std::uint64_t ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
      c.*m = detail::parse_unsigned<std::uint64_t>(v, l, k);
    };
  };
  auto sz = [](auto field) -> Setter {
    return [field](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
      field(c) = detail::parse_unsigned<std::size_t>(v, l, k);
    };
  };
  auto word = [](std::string ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
      c.*m = detail::parse_word(v, l, k);
    };
  };
  const std::map<std::string, Setter, std::less<>> setters = {
      {"experiment", word(&ExperimentConfig::experiment)},
      {"seed", u64(&ExperimentConfig::seed)},
      {"trials", sz([](ExperimentConfig& c) -> std::size_t& { return c.trials; })},
      {"out", word(&ExperimentConfig::out)},
      {"problem.d", sz([](ExperimentConfig& c) -> std::size_t& { return c.problem.d; })},
      {"problem.alpha",
       [](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
         c.problem.alpha = detail::parse_decimal(v, l, k);
       }},
      {"problem.b", sz([](ExperimentConfig& c) -> std::size_t& { return c.b; })},
      {"ots.hlen", sz([](ExperimentConfig& c) -> std::size_t& { return c.ots.hlen; })},
      {"ots.slen", sz([](ExperimentConfig& c) -> std::size_t& { return c.ots.slen; })},
      {"ots.hash_rounds", sz([](ExperimentConfig& c) -> std::size_t& { return c.ots.hash_rounds; })},
      {"ecc.bits_per_symbol",
       [](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
         c.ecc.bits_per_symbol = static_cast<int>(detail::parse_unsigned<unsigned>(v, l, k));
       }},
      {"ecc.k_sym", sz([](ExperimentConfig& c) -> std::size_t& { return c.ecc.k_sym; })},
      {"ecc.n_sym", sz([](ExperimentConfig& c) -> std::size_t& { return c.ecc.n_sym; })},
      {"attacker.kind", word(&ExperimentConfig::attacker)},
      {"attacker.query_budget", u64(&ExperimentConfig::query_budget)},
      {"attacker.bit_budget", sz([](ExperimentConfig& c) -> std::size_t& { return c.bit_budget; })},
      {"np.stage", word(&ExperimentConfig::np_stage)},
      {"np.k", sz([](ExperimentConfig& c) -> std::size_t& { return c.np_k; })},
      {"np.tau",
       [](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
         c.np_tau = detail::parse_decimal(v, l, k);
       }},
      {"np.reps", sz([](ExperimentConfig& c) -> std::size_t& { return c.np_reps; })},
      {"np.var_cap",
       [](ExperimentConfig& c, std::string_view v, std::size_t l, std::string_view k) {
         c.np_var_cap = static_cast<int>(detail::parse_unsigned<unsigned>(v, l, k));
       }},
      {"np.emit", sz([](ExperimentConfig& c) -> std::size_t& { return c.np_emit; })},
  };

  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string_view key = detail::trim(line.substr(0, eq));
    std::string_view value = detail::trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing value for " + std::string(key));
    it->second(cfg, value, line_no, key);
  }
  return cfg;
}

}  // namespace compgap
