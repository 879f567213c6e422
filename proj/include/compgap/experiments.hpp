#pragma once

// Seeded experiment runner behind the compgap CLI. run() computes
// everything in memory; write_outputs() persists it afterwards, so files
// have a single writer and identical (config, seed) pairs give identical
// bytes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "compgap/attackers.hpp"
#include "compgap/base_problems.hpp"
#include "compgap/circuit.hpp"
#include "compgap/cnf.hpp"
#include "compgap/config.hpp"
#include "compgap/constructions.hpp"
#include "compgap/errors.hpp"
#include "compgap/game.hpp"
#include "compgap/np_forge.hpp"
#include "compgap/parallel.hpp"
#include "compgap/solver.hpp"

namespace compgap {

struct CsvRow {
  std::string experiment;
  std::string subject;
  std::size_t budget = 0;
  std::string oracle;  // empty when there is no reference value
  RiskEstimate estimate;
};

struct RunOutput {
  ExperimentConfig config;
  std::vector<CsvRow> rows;
  std::vector<std::string> transcript;
  std::vector<std::pair<std::string, std::string>> files;  // relative path, contents
};

inline constexpr const char* kCsvHeader =
    "experiment,subject,d,alpha,b,hlen,slen,k_sym,n_sym,budget,oracle,point,half_width,trials,seed";

inline std::string fmt_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string csv_line(const ExperimentConfig& c, const CsvRow& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.subject << ',' << c.problem.d << ',' << fmt_decimal(c.problem.alpha) << ',' << c.b << ','
     << c.ots.hlen << ',' << c.ots.slen << ',' << c.ecc.k_sym << ',' << c.ecc.n_sym << ',' << r.budget << ',' << r.oracle
     << ',' << fmt_decimal(r.estimate.point) << ',' << fmt_decimal(r.estimate.half_width) << ',' << r.estimate.trials
     << ',' << r.estimate.seed;
  return os.str();
}

namespace detail {

inline void log_games(RunOutput& out, const std::string& subject, const std::vector<GameOutcome>& games,
                      std::uint64_t seed) {
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& g = games[i];
    std::ostringstream os;
    os << out.config.experiment << ' ' << subject << " game=" << i << " seed=" << mix_seed(seed, i)
       << " y=" << g.true_label.value() << " won=" << (g.won ? 1 : 0) << " reason=" << to_string(g.reason)
       << " perturbation=" << g.perturbation_used << " queries=" << g.queries_used;
    if (!g.note.empty()) os << " note=\"" << g.note << '"';
    out.transcript.push_back(os.str());
  }
}

inline void run_risk(RunOutput& out) {
  const auto& c = out.config;
  Problem base = majority_noise_problem(c.problem);
  Hypothesis h = majority_hypothesis(c.problem.d);
  Problem wrapped = wrapped_problem_c1(base, c.ots, c.ecc);
  Hypothesis hw = classifier_c1(h, c.ots, c.ecc);

  std::vector<char> base_err(c.trials), wrapped_err(c.trials);
  parallel_for(c.trials, [&](std::size_t i) {
    std::uint64_t s = mix_seed(c.seed, i);
    Sample a = base.sample(s);
    Sample b = wrapped.sample(s);
    base_err[i] = h(a.x) != a.y ? 1 : 0;
    wrapped_err[i] = hw(b.x) != b.y ? 1 : 0;
  });
  std::size_t nb = 0, nw = 0;
  for (std::size_t i = 0; i < c.trials; ++i) {
    nb += static_cast<std::size_t>(base_err[i]);
    nw += static_cast<std::size_t>(wrapped_err[i]);
    if (base_err[i] != 0 || wrapped_err[i] != 0) {
      out.transcript.push_back("risk sample=" + std::to_string(i) + " seed=" + std::to_string(mix_seed(c.seed, i)) +
                               " base_error=" + std::to_string(int(base_err[i])) +
                               " wrapped_error=" + std::to_string(int(wrapped_err[i])));
    }
  }
  out.rows.push_back({"risk", "base", 0, fmt_decimal(c.problem.alpha), RiskEstimate::from_counts(nb, c.trials, c.seed)});
  out.rows.push_back({"risk", "wrapped", 0, fmt_decimal(c.problem.alpha), RiskEstimate::from_counts(nw, c.trials, c.seed)});
  if (base_err != wrapped_err) throw InvariantViolation("wrapped risk differs from base risk on shared seeds");
}

inline void run_adv_risk(RunOutput& out) {
  const auto& c = out.config;
  Problem base = majority_noise_problem(c.problem);
  Hypothesis h = majority_hypothesis(c.problem.d);
  Attacker a = c.attacker == "identity"     ? identity_attacker()
               : c.attacker == "exhaustive" ? exhaustive_ball_attacker(c.b)
                                            : greedy_majority_attacker(c.b);
  auto games = play_games(base, h, a, c.b, c.trials, c.seed);
  double oracle = a.power == AttackerPower::Identity ? c.problem.alpha
                  : c.problem.d < 63                 ? analytic_adv_risk(c.problem, c.b)
                                                     : -1.0;
  out.rows.push_back({"adv-risk", a.name, c.b, oracle < 0 ? "" : fmt_decimal(oracle), summarize(games, c.seed)});
  log_games(out, a.name, games, c.seed);
}

inline void run_separation(RunOutput& out) {
  const auto& c = out.config;
  Problem base = majority_noise_problem(c.problem);
  Hypothesis h = majority_hypothesis(c.problem.d);
  Problem wrapped = wrapped_problem_c1(base, c.ots, c.ecc);
  Hypothesis hw = classifier_c1(h, c.ots, c.ecc);
  C1Target target{c.problem.d, c.ots, c.ecc};
  // The bounded attacker gets the larger bit budget t_max; the unbounded one b + ell.
  const std::size_t budget = c.separation_budget();
  const std::size_t wide = c.ecc.t_max();

  Attacker bounded = bounded_attacker_c1(target, c.query_budget, c.b, wide);
  Attacker unbounded = unbounded_attacker_c1(target, c.b);
  auto gb = play_games(wrapped, hw, bounded, wide, c.trials, c.seed);
  auto gu = play_games(wrapped, hw, unbounded, budget, c.trials, c.seed);
  for (const auto& g : gb) {
    if (g.queries_used > c.query_budget) throw InvariantViolation("bounded attacker exceeded its query budget");
  }
  RiskEstimate eb = summarize(gb, c.seed);
  RiskEstimate eu = summarize(gu, c.seed);
  double oracle = analytic_adv_risk(c.problem, c.b);
  out.rows.push_back({"separation", "bounded-c1", wide, fmt_decimal(c.problem.alpha), eb});
  out.rows.push_back({"separation", "unbounded-c1", budget, fmt_decimal(oracle), eu});
  RiskEstimate gap;
  gap.point = eu.point - eb.point;
  gap.half_width = std::sqrt(eu.half_width * eu.half_width + eb.half_width * eb.half_width);
  gap.trials = c.trials;
  gap.seed = c.seed;
  out.rows.push_back({"separation", "gap", budget, fmt_decimal(oracle - c.problem.alpha), gap});
  log_games(out, "bounded-c1", gb, c.seed);
  log_games(out, "unbounded-c1", gu, c.seed);
}

inline void run_c3(RunOutput& out) {
  const auto& c = out.config;
  Problem base = balanced_uniform_problem(c.ecc.data_bits());
  Problem p = c3_problem(base, c.ots, c.ecc);
  Hypothesis h = classifier_c3(c.ots, c.ecc);
  C3Target target{c.ots, c.ecc};
  const std::size_t budget = c.c3_budget();

  RiskEstimate honest = estimate_risk(p, h, c.trials, c.seed);
  out.rows.push_back({"c3", "honest", 0, fmt_decimal(0.0), honest});
  auto gu = play_games(p, h, unbounded_attacker_c3(target), budget, c.trials, c.seed);
  auto gb = play_games(p, h, bounded_attacker_c3(target, c.query_budget, budget), budget, c.trials, c.seed);
  for (const auto& g : gb) {
    if (g.queries_used > c.query_budget) throw InvariantViolation("bounded attacker exceeded its query budget");
  }
  out.rows.push_back({"c3", "unbounded-c3", budget, fmt_decimal(0.5), summarize(gu, c.seed)});
  out.rows.push_back({"c3", "bounded-c3", budget, fmt_decimal(0.0), summarize(gb, c.seed)});
  log_games(out, "unbounded-c3", gu, c.seed);
  log_games(out, "bounded-c3", gb, c.seed);
  if (honest.successes != 0) throw InvariantViolation("honest samples were misclassified");
}

inline void run_np_forge(RunOutput& out) {
  const auto& c = out.config;
  Problem base = majority_noise_problem(c.problem);
  HypothesisCircuit hc = circuit_of_majority(c.problem.d);
  const double beta = analytic_adv_risk(c.problem, c.b);
  const double tau = c.np_tau > 0.0 ? c.np_tau : midway_tau(c.problem.alpha, beta);
  const SamplerStage stage = c.np_stage == "S1" ? SamplerStage::S1 : c.np_stage == "S2" ? SamplerStage::S2 : SamplerStage::S;
  SolverLimits limits;
  limits.var_cap = c.np_var_cap;

  auto build = [&](std::uint64_t s) {
    switch (stage) {
      case SamplerStage::S1: return sample_s1(base, hc, c.b, s);
      case SamplerStage::S2: return sample_s2(base, hc, c.b, c.np_k, tau, s);
      case SamplerStage::S: break;
    }
    return sample_s_final(base, hc, c.b, c.np_k, tau, c.np_reps, s);
  };

  std::vector<SolveStatus> status(c.trials);
  std::vector<int> vars(c.trials);
  std::vector<char> bad_witness(c.trials, 0);
  std::vector<std::string> dimacs(std::min(c.np_emit, c.trials));
  parallel_for(c.trials, [&](std::size_t i) {
    SamplerBundle bundle = build(mix_seed(c.seed, i));
    vars[i] = bundle.formula.num_vars;
    if (i < dimacs.size()) dimacs[i] = to_dimacs(bundle.formula);
    SolveResult r = solve_small(bundle.formula, {}, limits);
    status[i] = r.status;
    if (r.sat()) {
      for (const auto& w : bundle.decode_witness(r.assignment)) {
        if (!witness_valid(hc, w, c.b)) bad_witness[i] = 1;
      }
    }
  });

  std::size_t sat = 0, capped = 0;
  std::vector<ManifestEntry> manifest;
  for (std::size_t i = 0; i < c.trials; ++i) {
    sat += status[i] == SolveStatus::Sat ? 1 : 0;
    capped += status[i] == SolveStatus::CapExceeded ? 1 : 0;
    out.transcript.push_back("np-forge " + c.np_stage + " draw=" + std::to_string(i) +
                             " seed=" + std::to_string(mix_seed(c.seed, i)) + " vars=" + std::to_string(vars[i]) +
                             " status=" + to_string(status[i]));
    if (i < dimacs.size()) {
      std::string name = "cnf/" + c.np_stage + "_" + std::to_string(i) + ".cnf";
      out.files.emplace_back(name, dimacs[i]);
      std::size_t k = stage == SamplerStage::S1 ? 1 : c.np_k;
      manifest.push_back({name, stage, mix_seed(c.seed, i), c.problem.d, c.b, k, stage == SamplerStage::S1 ? 1.0 : tau});
    }
  }
  std::ostringstream mf;
  write_manifest(mf, manifest);
  out.files.emplace_back("cnf/manifest.txt", mf.str());

  // S1 is satisfiable exactly with probability beta; the composed stages are
  // bounded below via Chernoff (and a union bound over reps).
  double eps = beta - c.problem.alpha;
  double oracle = beta;
  if (stage != SamplerStage::S1) {
    double p2 = 1.0 - std::exp(-static_cast<double>(c.np_k) * (eps / 2) * (eps / 2));
    oracle = stage == SamplerStage::S2 ? p2 : std::max(0.0, 1.0 - static_cast<double>(c.np_reps) * (1.0 - p2));
  }
  out.rows.push_back({"np-forge", c.np_stage, c.b, fmt_decimal(oracle), RiskEstimate::from_counts(sat, c.trials, c.seed)});
  if (capped != 0) out.transcript.push_back("np-forge cap_exceeded=" + std::to_string(capped));
  for (char b : bad_witness) {
    if (b != 0) throw InvariantViolation("a satisfying assignment decoded to an invalid adversarial example");
  }
}

inline void run_oracle_check(RunOutput& out) {
  const auto& c = out.config;
  Hypothesis h = majority_hypothesis(c.problem.d);
  bool ok = true;
  if (c.problem.d <= 20) {
    auto analytic = analytic_adv_risk_exact(c.problem, c.b);
    auto brute = brute_force_adv_risk(c.problem, h, c.b);
    RiskEstimate e;
    e.point = analytic.value();
    e.trials = static_cast<std::size_t>(analytic.total);
    e.seed = c.seed;
    out.rows.push_back({"oracle-check", "analytic-vs-enumeration", c.b, fmt_decimal(brute.value()), e});
    out.transcript.push_back("oracle-check analytic clean=" + std::to_string(analytic.clean_wins) + " noisy=" +
                             std::to_string(analytic.noisy_wins) + " enumeration clean=" +
                             std::to_string(brute.clean_wins) + " noisy=" + std::to_string(brute.noisy_wins));
    ok = ok && analytic == brute;
  }
  // Random corruption of at most t_max symbols must always decode.
  auto codec = reed_solomon_for(c.ecc);
  std::vector<char> good(c.trials, 0);
  parallel_for(c.trials, [&](std::size_t i) {
    Rng rng(mix_seed(c.seed, i));
    BitString msg = random_bits(rng, c.ecc.data_bits());
    BitString word = codec->encode(msg);
    std::size_t flips = static_cast<std::size_t>(uniform_below(rng, c.ecc.t_max() + 1));
    for (std::size_t f = 0; f < flips; ++f) word.flip(static_cast<std::size_t>(uniform_below(rng, word.size())));
    auto back = codec->decode(word);
    good[i] = back && *back == msg ? 1 : 0;
  });
  std::size_t recovered = 0;
  for (char g : good) recovered += static_cast<std::size_t>(g);
  out.rows.push_back({"oracle-check", "ecc-roundtrip", c.ecc.t_max(), fmt_decimal(1.0),
                      RiskEstimate::from_counts(recovered, c.trials, c.seed)});
  ok = ok && recovered == c.trials;
  if (!ok) throw InvariantViolation("an oracle disagreed with its cross-check");
}

}  // namespace detail

/// Runs the configured experiment. Throws ConfigError before any work when
/// the configuration is invalid, InvariantViolation when a checked property
/// fails (the partial output is then discarded).
inline RunOutput run(const ExperimentConfig& config) {
  config.validate();
  RunOutput out;
  out.config = config;
  const auto& e = config.experiment;
  if (e == "risk") detail::run_risk(out);
  else if (e == "adv-risk") detail::run_adv_risk(out);
  else if (e == "separation") detail::run_separation(out);
  else if (e == "c3") detail::run_c3(out);
  else if (e == "np-forge") detail::run_np_forge(out);
  else detail::run_oracle_check(out);
  return out;
}

inline std::string results_csv(const RunOutput& out) {
  std::string s = std::string(kCsvHeader) + "\n";
  for (const auto& r : out.rows) s += csv_line(out.config, r) + "\n";
  return s;
}

inline void write_outputs(const RunOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [](const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
  };
  put(dir / "results.csv", results_csv(out));
  std::string log;
  for (const auto& line : out.transcript) log += line + "\n";
  put(dir / "transcript.log", log);
  for (const auto& [rel, text] : out.files) put(dir / rel, text);
}

/// Fixed-width summary table of a results.csv.
inline std::string report_table(std::istream& csv) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw FormatError("results file is empty");
  const std::vector<std::string> want = {"experiment", "subject", "budget", "oracle", "point", "half_width", "trials", "seed"};
  std::vector<std::size_t> idx;
  for (const auto& w : want) {
    std::size_t k = 0;
    while (k < rows[0].size() && rows[0][k] != w) ++k;
    if (k == rows[0].size()) throw FormatError("results file lacks column " + w);
    idx.push_back(k);
  }
  std::vector<std::size_t> width(want.size(), 0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < idx.size(); ++j) width[j] = std::max(width[j], idx[j] < r.size() ? r[idx[j]].size() : 0);
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      std::string cell = idx[j] < r.size() ? r[idx[j]] : "";
      os << cell << std::string(width[j] - cell.size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace compgap
