#pragma once

// The base problem Q: uniform x in {0,1}^d, label MAJ(x) flipped with
// probability alpha. Both its risk and its adversarial risk have closed
// forms, which makes every downstream claim checkable.
//
// Optimal attack: against MAJ, an attacker with b flips wins a clean sample
// exactly when |2*ones(x) - d| <= 2b. Flipping (|2*ones - d| + 1) / 2 bits on
// the majority side is necessary and sufficient, and no other choice of bits
// moves the count faster. Noisy samples are already misclassified.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"
#include "compgap/game.hpp"
#include "compgap/random.hpp"

namespace compgap {

struct MajorityNoise {
  std::size_t d = 15;
  double alpha = 0.05;

  void validate() const {
    if (d % 2 == 0) throw ConfigError("problem.d must be odd");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("problem.alpha must lie in [0, 1)");
  }
};

inline Label majority(const BitString& x) { return Label(2 * x.popcount() > x.size() ? 1 : 0); }

inline Sample sample_majority_noise(const MajorityNoise& params, std::uint64_t seed) {
  Rng rng(seed);
  BitString x = random_bits(rng, params.d);
  int y = majority(x).value();
  if (bernoulli(rng, params.alpha)) y ^= 1;
  return {std::move(x), Label(y)};
}

inline Problem majority_noise_problem(const MajorityNoise& params) {
  params.validate();
  return Problem("majority-noise", params.d, 2,
                 [params](std::uint64_t seed) { return sample_majority_noise(params, seed); });
}

inline Hypothesis majority_hypothesis(std::size_t d) { return Hypothesis(d, [](const BitString& x) { return majority(x); }); }

/// Exact adversarial risk as integer counts over the 2^d instances:
/// value = ((1 - alpha) * clean_wins + alpha * noisy_wins) / total.
struct ExactAdvRisk {
  std::uint64_t clean_wins = 0;
  std::uint64_t noisy_wins = 0;
  std::uint64_t total = 0;
  double alpha = 0.0;

  double value() const noexcept {
    return ((1.0 - alpha) * static_cast<double>(clean_wins) + alpha * static_cast<double>(noisy_wins)) /
           static_cast<double>(total);
  }

  friend bool operator==(const ExactAdvRisk&, const ExactAdvRisk&) = default;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Closed form for MAJ: alpha + (1 - alpha) * Pr[|2*ones(x) - d| <= 2b].
inline ExactAdvRisk analytic_adv_risk_exact(const MajorityNoise& params, std::size_t b) {
  params.validate();
  if (params.d >= 63) throw ConfigError("analytic_adv_risk supports d < 63");
  ExactAdvRisk r;
  r.alpha = params.alpha;
  r.total = std::uint64_t{1} << params.d;
  r.noisy_wins = r.total;
  auto d = static_cast<long long>(params.d);
  for (long long k = 0; k <= d; ++k) {
    long long margin = 2 * k - d;
    if (margin < 0) margin = -margin;
    if (margin <= 2 * static_cast<long long>(b)) r.clean_wins += binomial(params.d, static_cast<std::uint64_t>(k));
  }
  return r;
}

inline double analytic_adv_risk(const MajorityNoise& params, std::size_t b) {
  return analytic_adv_risk_exact(params, b).value();
}

namespace detail {

// Calls fn(mask) for every flip mask over d bits of weight 1..b, stopping early
// when fn returns true. Returns whether any call returned true.
template <typename Fn>
bool any_in_ball(std::size_t d, std::size_t b, Fn&& fn) {
  std::vector<std::size_t> idx;
  for (std::size_t w = 1; w <= b && w <= d; ++w) {
    idx.resize(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    for (;;) {
      std::uint64_t mask = 0;
      for (auto i : idx) mask |= std::uint64_t{1} << i;
      if (fn(mask)) return true;
      std::size_t pos = w;
      while (pos > 0 && idx[pos - 1] == d - w + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return false;
}

}  // namespace detail

/// Exact adversarial risk of an arbitrary hypothesis on MajorityNoise by
/// enumerating every x and its Hamming ball of radius b, judged with the
/// same winning conditions as the game.
inline ExactAdvRisk brute_force_adv_risk(const MajorityNoise& params, const Hypothesis& h, std::size_t b,
                                         std::size_t max_d = 20) {
  params.validate();
  if (params.d > max_d) throw ConfigError("brute_force_adv_risk: d exceeds max_d");
  ExactAdvRisk r;
  r.alpha = params.alpha;
  r.total = std::uint64_t{1} << params.d;
  for (std::uint64_t v = 0; v < r.total; ++v) {
    BitString x = BitString::from_uint(v, params.d);
    Label clean = majority(x);
    Label noisy(clean.value() ^ 1);
    Label hx = h(x);
    auto wins = [&](Label y) {
      if (hx != y) return true;
      return detail::any_in_ball(params.d, b, [&](std::uint64_t mask) {
        Label got = h(BitString::from_uint(v ^ mask, params.d));
        return !got.is_star() && got != y;
      });
    };
    if (wins(clean)) ++r.clean_wins;
    if (wins(noisy)) ++r.noisy_wins;
  }
  return r;
}

}  // namespace compgap
