#pragma once

// Instances, labels, hypotheses and the challenger/adversary game.
//
// A game samples (x, y) from a problem, hands both to the attacker together
// with oracle access to the hypothesis and to the problem's sampler, and
// judges the returned x' with `winning`. The learner step is degenerate:
// hypotheses are fixed values, so a "learner" is just a function returning one.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"
#include "compgap/parallel.hpp"
#include "compgap/random.hpp"
#include "compgap/toy_hash.hpp"

namespace compgap {

/// A class identifier in [0, label_count) or the tamper-detection symbol.
class Label {
 public:
  constexpr Label() = default;
  constexpr explicit Label(int value) : value_(value) {
    if (value < 0) throw ConfigError("labels are non-negative; use Label::star() for tamper detection");
  }
  static constexpr Label star() noexcept {
    Label l;
    l.value_ = kStar;
    return l;
  }

  constexpr bool is_star() const noexcept { return value_ == kStar; }
  constexpr int value() const noexcept { return value_; }

  friend constexpr bool operator==(Label, Label) = default;

  std::string to_string() const { return is_star() ? std::string("*") : std::to_string(value_); }

 private:
  static constexpr int kStar = -1;
  int value_ = 0;
};

struct Sample {
  BitString x;
  Label y;
};

/// A samplable labeled distribution over fixed-length instances.
class Problem {
 public:
  using Sampler = std::function<Sample(std::uint64_t seed)>;

  Problem(std::string name, std::size_t instance_len, int label_count, Sampler sampler)
      : name_(std::move(name)), instance_len_(instance_len), label_count_(label_count), sampler_(std::move(sampler)) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t instance_len() const noexcept { return instance_len_; }
  int label_count() const noexcept { return label_count_; }

  /// Deterministic in `seed`; distinct seeds give independent draws.
  Sample sample(std::uint64_t seed) const {
    Sample s = sampler_(seed);
    if (s.x.size() != instance_len_) throw LengthError("sampler produced an instance of the wrong length");
    if (s.y.is_star() || s.y.value() >= label_count_) throw SamplerError("sampler produced a label outside the label set");
    return s;
  }

 private:
  std::string name_;
  std::size_t instance_len_;
  int label_count_;
  Sampler sampler_;
};

/// Total, deterministic map from instances to labels (possibly STAR).
class Hypothesis {
 public:
  using Fn = std::function<Label(const BitString&)>;

  Hypothesis(std::size_t input_len, Fn fn) : input_len_(input_len), fn_(std::move(fn)) {}

  std::size_t input_len() const noexcept { return input_len_; }

  Label operator()(const BitString& x) const {
    if (x.size() != input_len_) throw LengthError("hypothesis applied to an instance of the wrong length");
    return fn_(x);
  }

 private:
  std::size_t input_len_;
  Fn fn_;
};

/// Learner interface. Only the constant learner ships; training data is ignored.
class ConstantLearner {
 public:
  explicit ConstantLearner(Hypothesis h) : h_(std::move(h)) {}
  Hypothesis fit(const std::vector<Sample>& /*training*/) const { return h_; }

 private:
  Hypothesis h_;
};

enum class OutcomeReason { MisclassifiedUntampered, TamperWin, BudgetExceeded, DetectedStar, CorrectLabel };

inline std::string_view to_string(OutcomeReason r) {
  switch (r) {
    case OutcomeReason::MisclassifiedUntampered: return "MISCLASSIFIED_UNTAMPERED";
    case OutcomeReason::TamperWin: return "TAMPER_WIN";
    case OutcomeReason::BudgetExceeded: return "BUDGET_EXCEEDED";
    case OutcomeReason::DetectedStar: return "DETECTED_STAR";
    case OutcomeReason::CorrectLabel: return "CORRECT_LABEL";
  }
  return "UNKNOWN";
}

struct GameOutcome {
  bool won = false;
  OutcomeReason reason = OutcomeReason::CorrectLabel;
  std::size_t perturbation_used = 0;
  std::uint64_t queries_used = 0;
  Label true_label;
  std::string note;
};

/// Monte-Carlo estimate with a 95% normal-approximation half-width,
/// 1.96 * sqrt(point * (1 - point) / trials).
struct RiskEstimate {
  double point = 0.0;
  std::size_t trials = 0;
  double half_width = 0.0;
  std::uint64_t seed = 0;
  std::size_t successes = 0;

  static double half_width_for(double point, std::size_t trials) {
    return 1.96 * std::sqrt(point * (1.0 - point) / static_cast<double>(trials));
  }

  static RiskEstimate from_counts(std::size_t successes, std::size_t trials, std::uint64_t seed) {
    RiskEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.seed = seed;
    e.point = static_cast<double>(successes) / static_cast<double>(trials);
    e.half_width = half_width_for(e.point, trials);
    return e;
  }

  bool contains(double value, double widths = 1.0) const { return std::abs(point - value) <= widths * half_width; }
};

enum class AttackerPower { Identity, Bounded, Unbounded };

inline std::string_view to_string(AttackerPower p) {
  switch (p) {
    case AttackerPower::Identity: return "IDENTITY";
    case AttackerPower::Bounded: return "BOUNDED";
    case AttackerPower::Unbounded: return "UNBOUNDED";
  }
  return "UNKNOWN";
}

/// Per-game oracle access for the attacker: the hypothesis, the problem's
/// sampler, and the hash. Every call is charged against the query budget;
/// a call that would exceed it throws QueryBudgetExceeded.
class OracleContext {
 public:
  static constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

  OracleContext(const Problem& problem, const Hypothesis& h, std::uint64_t query_budget, std::uint64_t seed)
      : problem_(&problem), h_(&h), budget_(query_budget), rng_(seed), sampler_seed_(mix_seed(seed, 0x5A)) {}

  Label classify(const BitString& x) {
    charge(1);
    return (*h_)(x);
  }

  Sample sample() {
    charge(1);
    return problem_->sample(mix_seed(sampler_seed_, sampler_calls_++));
  }

  BitString hash(const BitString& input, std::size_t out_bits, std::size_t rounds) {
    charge(1);
    return toy_hash(input, out_bits, rounds);
  }

  /// Charges `n` calls made outside the context, e.g. through a HashCounter.
  void charge(std::uint64_t n) {
    if (n > remaining()) throw QueryBudgetExceeded("attacker exceeded its query budget");
    used_ += n;
  }

  std::uint64_t remaining() const noexcept { return budget_ - used_; }
  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t budget() const noexcept { return budget_; }
  Rng& rng() noexcept { return rng_; }

  void note(std::string text) {
    if (!note_.empty()) note_ += "; ";
    note_ += std::move(text);
  }
  const std::string& notes() const noexcept { return note_; }

 private:
  const Problem* problem_;
  const Hypothesis* h_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  Rng rng_;
  std::uint64_t sampler_seed_;
  std::uint64_t sampler_calls_ = 0;
  std::string note_;
};

/// A perturbation procedure tagged with its power class. Bounded attackers
/// run under `query_budget`; the others run unmetered but still counted.
struct Attacker {
  using Perturb = std::function<BitString(const BitString& x, Label y, OracleContext& ctx)>;

  std::string name;
  AttackerPower power = AttackerPower::Identity;
  std::uint64_t query_budget = 0;
  std::size_t instance_len = 0;  // 0 = any length
  Perturb perturb;
};

/// Winning conditions. Untouched x: the attacker wins iff h(x) != y, so STAR
/// on a clean instance counts as an error. Changed x: wins iff
/// HD(x, x') <= budget, h(x') != y and h(x') != STAR.
inline GameOutcome winning(const BitString& x, const BitString& x_prime, Label y, const Hypothesis& h,
                           std::size_t budget) {
  GameOutcome out;
  out.true_label = y;
  out.perturbation_used = hamming_distance(x, x_prime);
  if (out.perturbation_used == 0) {
    out.won = h(x) != y;
    out.reason = out.won ? OutcomeReason::MisclassifiedUntampered : OutcomeReason::CorrectLabel;
    return out;
  }
  if (out.perturbation_used > budget) {
    out.reason = OutcomeReason::BudgetExceeded;
    return out;
  }
  Label got = h(x_prime);
  if (got.is_star()) {
    out.reason = OutcomeReason::DetectedStar;
  } else if (got == y) {
    out.reason = OutcomeReason::CorrectLabel;
  } else {
    out.won = true;
    out.reason = OutcomeReason::TamperWin;
  }
  return out;
}

/// Seed of the attacker's private randomness in the game played with `seed`.
constexpr std::uint64_t attacker_seed(std::uint64_t seed) noexcept { return mix_seed(seed, 0xA77AC4E5ULL); }

inline GameOutcome play_game(const Problem& problem, const Hypothesis& h, const Attacker& attacker,
                             std::size_t budget, std::uint64_t seed) {
  if (attacker.instance_len != 0 && attacker.instance_len != problem.instance_len()) {
    throw AttackerProtocolError("attacker '" + attacker.name + "' is declared for a different instance length");
  }
  Sample s = problem.sample(seed);
  std::uint64_t query_budget =
      attacker.power == AttackerPower::Bounded ? attacker.query_budget : OracleContext::kUnlimited;
  OracleContext ctx(problem, h, query_budget, attacker_seed(seed));
  BitString x_prime;
  try {
    x_prime = attacker.perturb(s.x, s.y, ctx);
  } catch (const QueryBudgetExceeded& e) {
    throw AttackerProtocolError("attacker '" + attacker.name + "': " + e.what());
  }
  if (x_prime.size() != s.x.size()) {
    throw AttackerProtocolError("attacker '" + attacker.name + "' returned an instance of the wrong length");
  }
  GameOutcome out = winning(s.x, x_prime, s.y, h, budget);
  out.queries_used = ctx.used();
  out.note = ctx.notes();
  return out;
}

/// Plays `trials` games; game i uses seed mix_seed(seed, i).
inline std::vector<GameOutcome> play_games(const Problem& problem, const Hypothesis& h, const Attacker& attacker,
                                           std::size_t budget, std::size_t trials, std::uint64_t seed) {
  std::vector<GameOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t i) { outcomes[i] = play_game(problem, h, attacker, budget, mix_seed(seed, i)); });
  return outcomes;
}

inline RiskEstimate summarize(const std::vector<GameOutcome>& outcomes, std::uint64_t seed) {
  std::size_t wins = 0;
  for (const auto& o : outcomes) wins += o.won ? 1 : 0;
  return RiskEstimate::from_counts(wins, outcomes.size(), seed);
}

/// Fraction of samples with h(x) != y; STAR never equals a label.
inline RiskEstimate estimate_risk(const Problem& problem, const Hypothesis& h, std::size_t trials,
                                  std::uint64_t seed) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  std::vector<char> errors(trials, 0);
  parallel_for(trials, [&](std::size_t i) {
    Sample s = problem.sample(mix_seed(seed, i));
    errors[i] = h(s.x) != s.y ? 1 : 0;
  });
  std::size_t n = 0;
  for (char e : errors) n += static_cast<std::size_t>(e);
  return RiskEstimate::from_counts(n, trials, seed);
}

inline RiskEstimate estimate_adv_risk(const Problem& problem, const Hypothesis& h, const Attacker& attacker,
                                      std::size_t budget, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  return summarize(play_games(problem, h, attacker, budget, trials, seed), seed);
}

}  // namespace compgap
