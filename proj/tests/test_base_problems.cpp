#include <gtest/gtest.h>

#include "compgap/base_problems.hpp"

using namespace compgap;

namespace {

// Independent oracle: walk all 2^d instances and apply the margin rule by
// direct popcount, counting instances whose majority b flips can reverse.
std::uint64_t flippable_instances(std::size_t d, std::size_t b) {
  std::uint64_t n = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << d); ++v) {
    int ones = __builtin_popcountll(v);
    int zeros = static_cast<int>(d) - ones;
    int need = ones > zeros ? ones - (static_cast<int>(d) - 1) / 2 : (static_cast<int>(d) + 1) / 2 - ones;
    n += need <= static_cast<int>(b) ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST(Majority, Examples) {
  EXPECT_EQ(majority(BitString::from_string("1110000")), Label(0));
  EXPECT_EQ(majority(BitString::from_string("1111000")), Label(1));
}

TEST(Majority, HypothesisAgreesWithTruthTableAtD7) {
  auto h = majority_hypothesis(7);
  for (std::uint64_t v = 0; v < 128; ++v) {
    EXPECT_EQ(h(BitString::from_uint(v, 7)), Label(__builtin_popcountll(v) >= 4 ? 1 : 0));
  }
}

TEST(MajorityNoise, Validation) {
  EXPECT_THROW((MajorityNoise{14, 0.1}.validate()), ConfigError);
  EXPECT_THROW((MajorityNoise{15, 1.0}.validate()), ConfigError);
  EXPECT_THROW((MajorityNoise{15, -0.1}.validate()), ConfigError);
}

TEST(MajorityNoise, NoiselessLabelIsMajority) {
  MajorityNoise q{15, 0.0};
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto smp = sample_majority_noise(q, s);
    EXPECT_EQ(smp.y, majority(smp.x));
  }
}

TEST(MajorityNoise, NoiseRateAndUniformMarginal) {
  MajorityNoise q{15, 0.05};
  const int n = 100000;
  int flipped = 0;
  std::vector<int> ones(15, 0);
  for (int s = 0; s < n; ++s) {
    auto smp = sample_majority_noise(q, mix_seed(5, s));
    flipped += smp.y != majority(smp.x) ? 1 : 0;
    for (std::size_t i = 0; i < 15; ++i) ones[i] += smp.x[i] ? 1 : 0;
  }
  double hw = 3 * std::sqrt(0.05 * 0.95 / n);
  EXPECT_NEAR(flipped / double(n), 0.05, hw);
  for (int c : ones) EXPECT_NEAR(c / double(n), 0.5, 3 * std::sqrt(0.25 / n) * 1.5);
}

TEST(AnalyticAdvRisk, WorkedValueD15) {
  // frozen: 22880 of 32768 instances within margin 4
  MajorityNoise q{15, 0.05};
  auto r = analytic_adv_risk_exact(q, 2);
  EXPECT_EQ(r.clean_wins, 22880u);
  EXPECT_EQ(r.total, 32768u);
  EXPECT_EQ(flippable_instances(15, 2), 22880u);
  EXPECT_NEAR(analytic_adv_risk(q, 2), 0.05 + 0.95 * 22880.0 / 32768.0, 1e-15);
  EXPECT_NEAR(analytic_adv_risk(q, 2), 0.7133, 1e-4);
}

TEST(AnalyticAdvRisk, WorkedValueD11) {
  // frozen: 1584 of 2048 instances within margin 4
  MajorityNoise q{11, 0.05};
  EXPECT_EQ(analytic_adv_risk_exact(q, 2).clean_wins, 1584u);
  EXPECT_EQ(flippable_instances(11, 2), 1584u);
}

TEST(AnalyticAdvRisk, BudgetZeroIsAlpha) {
  for (double a : {0.0, 0.05, 0.2}) EXPECT_DOUBLE_EQ(analytic_adv_risk({15, a}, 0), a);
}

TEST(AnalyticAdvRisk, LargeBudgetIsOne) {
  for (std::size_t d : {1u, 3u, 7u, 15u}) {
    EXPECT_DOUBLE_EQ(analytic_adv_risk({d, 0.05}, (d + 1) / 2), 1.0);
  }
}

TEST(AnalyticAdvRisk, NonDecreasingInBudget) {
  for (std::size_t d : {5u, 11u, 15u, 21u}) {
    double prev = -1;
    for (std::size_t b = 0; b <= d; ++b) {
      double v = analytic_adv_risk({d, 0.05}, b);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(AnalyticAdvRisk, MatchesIndependentEnumeration) {
  for (std::size_t d = 1; d <= 15; d += 2)
    for (std::size_t b = 0; b <= 3; ++b) EXPECT_EQ(analytic_adv_risk_exact({d, 0.1}, b).clean_wins, flippable_instances(d, b));
}

TEST(BruteForceAdvRisk, EqualsAnalyticExactly) {
  for (std::size_t d = 1; d <= 15; d += 2)
    for (std::size_t b = 0; b <= 3; ++b)
      for (double a : {0.0, 0.05, 0.2}) {
        MajorityNoise q{d, a};
        EXPECT_EQ(brute_force_adv_risk(q, majority_hypothesis(d), b), analytic_adv_risk_exact(q, b))
            << "d=" << d << " b=" << b << " alpha=" << a;
      }
}

TEST(BruteForceAdvRisk, BudgetZeroIsRisk) {
  MajorityNoise q{9, 0.2};
  EXPECT_DOUBLE_EQ(brute_force_adv_risk(q, majority_hypothesis(9), 0).value(), 0.2);
}

TEST(BruteForceAdvRisk, ConstantHypothesisIsLabelMismatchRate) {
  // For h = 0 on odd d, Pr[y != 0] = Pr[y = 1] = 1/2 by symmetry regardless of alpha.
  MajorityNoise q{9, 0.2};
  Hypothesis h(9, [](const BitString&) { return Label(0); });
  for (std::size_t b = 0; b <= 3; ++b) EXPECT_DOUBLE_EQ(brute_force_adv_risk(q, h, b).value(), 0.5);
}

TEST(BruteForceAdvRisk, CapEnforced) {
  EXPECT_THROW(brute_force_adv_risk({21, 0.0}, majority_hypothesis(21), 1), ConfigError);
}
