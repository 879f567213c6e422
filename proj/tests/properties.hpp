#pragma once

// Generated-case property suites for the game invariants. Shared by the unit
// tests and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "compgap/attackers.hpp"
#include "compgap/base_problems.hpp"
#include "compgap/game.hpp"
#include "compgap/random.hpp"

namespace compgap::props {

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

/// Lookup-table hypothesis over d <= 12 bits; each entry is 0, 1 or STAR.
/// With force_star the all-zero instance maps to STAR.
inline Hypothesis random_table_hypothesis(Rng& rng, std::size_t d, double star_rate, bool force_star = false) {
  auto table = std::make_shared<std::vector<Label>>(std::size_t{1} << d);
  for (auto& l : *table) l = bernoulli(rng, star_rate) ? Label::star() : Label(static_cast<int>(rng() & 1U));
  if (force_star) (*table)[0] = Label::star();
  return Hypothesis(d, [table](const BitString& x) { return (*table)[x.to_uint()]; });
}

/// Uniform x with a label from a random table, flipped with probability alpha.
inline Problem random_table_problem(Rng& rng, std::size_t d, double alpha) {
  auto table = std::make_shared<std::vector<int>>(std::size_t{1} << d);
  for (auto& v : *table) v = static_cast<int>(rng() & 1U);
  return Problem("random-table", d, 2, [table, d, alpha](std::uint64_t seed) {
    Rng r(seed);
    BitString x = random_bits(r, d);
    int y = (*table)[x.to_uint()];
    if (bernoulli(r, alpha)) y ^= 1;
    return Sample{std::move(x), Label(y)};
  });
}

struct Case {
  Problem problem;
  Hypothesis h;
  std::uint64_t seed;
  std::size_t trials;
  std::string label;
};

inline Case random_case(Rng& rng, std::size_t index) {
  std::size_t d = 1 + 2 * uniform_below(rng, 5);  // odd, as MajorityNoise requires
  double alpha = 0.3 * uniform01(rng);
  std::uint64_t seed = rng();
  std::size_t trials = 20 + uniform_below(rng, 200);
  std::string label = "case " + std::to_string(index) + " d=" + std::to_string(d) + " seed=" + std::to_string(seed);
  switch (uniform_below(rng, 3)) {
    case 0:
      return {majority_noise_problem({d, alpha}), majority_hypothesis(d), seed, trials, label + " majority"};
    case 1:
      return {majority_noise_problem({d, alpha}), random_table_hypothesis(rng, d, 0.2), seed, trials, label + " table-h"};
    default: {
      d += uniform_below(rng, 2);
      Problem p = random_table_problem(rng, d, alpha);
      return {p, random_table_hypothesis(rng, d, 0.1), seed, trials, label + " table-p"};
    }
  }
}

/// Identity attacker vs plain risk on identical seeds, per trial.
inline SuiteResult identity_equivalence(std::uint64_t seed, std::size_t cases) {
  SuiteResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    Case k = random_case(rng, c);
    ++res.cases;
    RiskEstimate plain = estimate_risk(k.problem, k.h, k.trials, k.seed);
    auto games = play_games(k.problem, k.h, identity_attacker(), 0, k.trials, k.seed);
    RiskEstimate adv = summarize(games, k.seed);
    bool ok = plain.successes == adv.successes && plain.point == adv.point;
    for (std::size_t i = 0; i < k.trials && ok; ++i) {
      Sample s = k.problem.sample(mix_seed(k.seed, i));
      ok = games[i].won == (k.h(s.x) != s.y) && games[i].perturbation_used == 0;
    }
    if (!ok) res.fail(k.label);
  }
  return res;
}

/// At bit budget 0 only x' = x is legal, so any attacker that keeps an
/// already misclassified x scores exactly the plain risk.
inline SuiteResult budget_zero_equivalence(std::uint64_t seed, std::size_t cases) {
  SuiteResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    Case k = random_case(rng, c);
    std::size_t ab = uniform_below(rng, 4);
    bool majority_h = k.label.ends_with("majority");
    Attacker a = majority_h && (rng() & 1U) ? greedy_majority_attacker(ab) : exhaustive_ball_attacker(ab);
    ++res.cases;
    RiskEstimate plain = estimate_risk(k.problem, k.h, k.trials, k.seed);
    RiskEstimate adv = estimate_adv_risk(k.problem, k.h, a, 0, k.trials, k.seed);
    if (plain.successes != adv.successes) {
      res.fail(k.label + " attacker=" + a.name + " b=" + std::to_string(ab));
    }
  }
  return res;
}

/// Exhaustive attacker at budgets 0..d on fixed seeds: every game won at
/// budget b is still won at b + 1, so the estimate never decreases.
inline SuiteResult exhaustive_monotonicity(std::uint64_t seed, std::size_t cases) {
  SuiteResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    Case k = random_case(rng, c);
    k.trials = std::min<std::size_t>(k.trials, 80);
    ++res.cases;
    std::vector<GameOutcome> prev;
    bool ok = true;
    for (std::size_t b = 0; b <= k.problem.instance_len() && ok; ++b) {
      auto games = play_games(k.problem, k.h, exhaustive_ball_attacker(b), b, k.trials, k.seed);
      if (!prev.empty()) {
        for (std::size_t i = 0; i < games.size() && ok; ++i) ok = !prev[i].won || games[i].won;
        ok = ok && summarize(games, k.seed).point >= summarize(prev, k.seed).point;
      }
      prev = std::move(games);
    }
    if (!ok) res.fail(k.label);
  }
  return res;
}

/// STAR on a tampered instance never wins; STAR on the untouched instance
/// always wins.
inline SuiteResult star_asymmetry(std::uint64_t seed, std::size_t cases) {
  SuiteResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    std::size_t d = 1 + uniform_below(rng, 10);
    Hypothesis h = random_table_hypothesis(rng, d, 0.5, true);
    ++res.cases;
    bool ok = true;
    std::size_t star_clean = 0, star_tampered = 0;
    for (int t = 0; t < 64 && ok; ++t) {
      BitString x = t == 0 ? BitString(d) : random_bits(rng, d);
      Label y(static_cast<int>(rng() & 1U));
      std::size_t budget = uniform_below(rng, d + 1);
      if (h(x).is_star()) {
        ++star_clean;
        auto o = winning(x, x, y, h, budget);
        ok = o.won && o.reason == OutcomeReason::MisclassifiedUntampered;
      }
      BitString xp = x;
      std::size_t flips = 1 + uniform_below(rng, d);
      for (std::size_t f = 0; f < flips; ++f) xp.flip(uniform_below(rng, d));
      if (xp != x && h(xp).is_star()) {
        ++star_tampered;
        auto o = winning(x, xp, y, h, d);
        ok = ok && !o.won && o.reason == OutcomeReason::DetectedStar;
      }
    }
    if (star_clean == 0 && star_tampered == 0) ok = false;  // the case exercised nothing
    if (!ok) res.fail("case " + std::to_string(c) + " d=" + std::to_string(d));
  }
  return res;
}

}  // namespace compgap::props
