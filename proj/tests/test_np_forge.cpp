#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "compgap/base_problems.hpp"
#include "compgap/np_forge.hpp"

using namespace compgap;

namespace {

// Exhaustive ball search on the plain hypothesis, independent of the encoder.
bool ball_has_example(const Sample& s, std::size_t b) {
  if (majority(s.x) != s.y) return true;
  const std::size_t d = s.x.size();
  std::uint64_t v = s.x.to_uint();
  return detail::any_in_ball(d, b, [&](std::uint64_t mask) {
    return majority(BitString::from_uint(v ^ mask, d)) != s.y;
  });
}

}  // namespace

TEST(S1, SatisfiableExactlyWhenTheBallHoldsAnExample) {
  for (std::size_t d : {5u, 7u, 11u}) {
    for (std::size_t b : {0u, 1u, 2u, 3u}) {
      MajorityNoise p{d, 0.1};
      Problem prob = majority_noise_problem(p);
      auto hc = circuit_of_majority(d);
      for (std::uint64_t s = 0; s < 60; ++s) {
        auto bundle = sample_s1(prob, hc, b, mix_seed(99, s));
        Sample smp = prob.sample(mix_seed(99, s));
        EXPECT_EQ(bundle.blocks[0].x, smp.x);
        ASSERT_EQ(solve_small(bundle.formula).sat(), ball_has_example(smp, b)) << d << ' ' << b << ' ' << s;
      }
    }
  }
}

TEST(S1, NoiselessZeroRadiusIsAlwaysUnsat) {
  Problem prob = majority_noise_problem({9, 0.0});
  auto hc = circuit_of_majority(9);
  for (std::uint64_t s = 0; s < 100; ++s) {
    EXPECT_EQ(solve_small(sample_s1(prob, hc, 0, s).formula).status, SolveStatus::Unsat);
  }
}

TEST(S1, DecodedWitnessesAreValid) {
  Problem prob = majority_noise_problem({11, 0.05});
  auto hc = circuit_of_majority(11);
  std::size_t sat = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto bundle = sample_s1(prob, hc, 2, s);
    auto r = solve_small(bundle.formula);
    if (!r.sat()) continue;
    ++sat;
    auto ws = bundle.decode_witness(r.assignment);
    ASSERT_EQ(ws.size(), 1u);
    EXPECT_TRUE(witness_valid(hc, ws[0], 2));
    EXPECT_LE(hamming_distance(ws[0].x, ws[0].x_prime), 2u);
  }
  EXPECT_GT(sat, 100u);
}

TEST(S1, WitnessValidRejectsBadCandidates) {
  auto hc = circuit_of_majority(5);
  auto x = BitString::from_string("11100");
  Witness same{0, x, x, Label(1)};
  EXPECT_FALSE(witness_valid(hc, same, 2));
  Witness far{0, x, BitString::from_string("00011"), Label(1)};
  EXPECT_FALSE(witness_valid(hc, far, 2));
  Witness ok{0, x, BitString::from_string("11000"), Label(1)};
  EXPECT_TRUE(witness_valid(hc, ok, 2));
}

TEST(S1, RejectsMismatchedCircuit) {
  Problem prob = majority_noise_problem({9, 0.0});
  EXPECT_THROW(sample_s1(prob, circuit_of_majority(7), 1, 0), ConfigError);
}

TEST(S2, SingleBlockFullThresholdMatchesS1) {
  Problem prob = majority_noise_problem({7, 0.1});
  auto hc = circuit_of_majority(7);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto s2 = sample_s2(prob, hc, 1, 1, 1.0, s);
    auto s1 = sample_s1(prob, hc, 1, mix_seed(s, 0));
    EXPECT_EQ(s2.blocks[0].x, s1.blocks[0].x);
    EXPECT_EQ(solve_small(s2.formula).sat(), solve_small(s1.formula).sat());
  }
}

TEST(S2, SatisfiableExactlyWhenEnoughBlocksAre) {
  Problem prob = majority_noise_problem({7, 0.1});
  auto hc = circuit_of_majority(7);
  for (double tau : {0.125, 0.5, 0.75, 1.0}) {
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto bundle = sample_s2(prob, hc, 1, 8, tau, s);
      std::size_t good = 0;
      for (std::size_t j = 0; j < 8; ++j) good += ball_has_example(prob.sample(mix_seed(s, j)), 1) ? 1 : 0;
      std::size_t need = static_cast<std::size_t>(std::ceil(tau * 8 - 1e-9));
      auto r = solve_small(bundle.formula);
      ASSERT_EQ(r.sat(), good >= need) << tau << ' ' << s;
      if (r.sat()) {
        auto ws = bundle.decode_witness(r.assignment);
        EXPECT_GE(ws.size(), need);
        for (const auto& w : ws) EXPECT_TRUE(witness_valid(hc, w, 1));
      }
    }
  }
}

TEST(S2, AllSelectorsOnMeansEveryBlockIsSatisfiable) {
  Problem prob = majority_noise_problem({5, 0.2});
  auto hc = circuit_of_majority(5);
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto bundle = sample_s2(prob, hc, 1, 4, 0.25, s);
    std::vector<Lit> assume(bundle.formula.annotations.at("selector").begin(),
                            bundle.formula.annotations.at("selector").end());
    bool all = true;
    for (std::size_t j = 0; j < 4; ++j) all = all && ball_has_example(prob.sample(mix_seed(s, j)), 1);
    EXPECT_EQ(solve_small(bundle.formula, assume).sat(), all);
  }
}

TEST(S2, BlocksUseDisjointVariables) {
  Problem prob = majority_noise_problem({7, 0.1});
  auto hc = circuit_of_majority(7);
  auto bundle = sample_s2(prob, hc, 2, 6, 0.5, 3);
  for (std::size_t i = 0; i < bundle.blocks.size(); ++i) {
    const auto& a = bundle.blocks[i];
    EXPECT_LE(a.first_var, a.last_var);
    for (int v : a.input_vars) {
      EXPECT_GE(v, a.first_var);
      EXPECT_LE(v, a.last_var);
    }
    for (std::size_t j = i + 1; j < bundle.blocks.size(); ++j) {
      const auto& c = bundle.blocks[j];
      EXPECT_TRUE(a.last_var < c.first_var || c.last_var < a.first_var);
    }
  }
}

TEST(S2, LowerThresholdNeverLosesSatisfiability) {
  Problem prob = majority_noise_problem({5, 0.15});
  auto hc = circuit_of_majority(5);
  for (std::uint64_t s = 0; s < 30; ++s) {
    bool prev = true;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) {
      bool now = solve_small(sample_s2(prob, hc, 1, 4, tau, s).formula).sat();
      EXPECT_TRUE(prev || !now);
      prev = now;
    }
  }
}

TEST(S2, ParameterChecks) {
  Problem prob = majority_noise_problem({7, 0.1});
  auto hc = circuit_of_majority(7);
  EXPECT_THROW(sample_s2(prob, hc, 1, 0, 0.5, 0), ConfigError);
  EXPECT_THROW(sample_s2(prob, hc, 1, 3, 0.0, 0), ConfigError);
  EXPECT_THROW(sample_s2(prob, hc, 1, 3, 1.5, 0), ConfigError);
  EXPECT_THROW(sample_s_final(prob, hc, 1, 3, 0.5, 0, 0), ConfigError);
  EXPECT_THROW(midway_tau(0.3, 0.2), ConfigError);
  EXPECT_DOUBLE_EQ(midway_tau(0.05, 0.75), 0.4);
}

TEST(S, SingleRepIsS2OnTheFirstSubSeed) {
  Problem prob = majority_noise_problem({7, 0.1});
  auto hc = circuit_of_majority(7);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto a = sample_s_final(prob, hc, 1, 4, 0.5, 1, s);
    auto b = sample_s2(prob, hc, 1, 4, 0.5, mix_seed(s, 0));
    EXPECT_EQ(a.formula, b.formula);
  }
}

TEST(S, SatisfiableIffEveryRepIs) {
  Problem prob = majority_noise_problem({5, 0.15});
  auto hc = circuit_of_majority(5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    bool all = true;
    for (std::size_t r = 0; r < 2; ++r) all = all && solve_small(sample_s2(prob, hc, 1, 3, 0.67, mix_seed(s, r)).formula).sat();
    EXPECT_EQ(solve_small(sample_s_final(prob, hc, 1, 3, 0.67, 2, s).formula).sat(), all);
  }
}

TEST(Manifest, Format) {
  std::ostringstream os;
  write_manifest(os, {{"cnf/S2_0.cnf", SamplerStage::S2, 42, 11, 2, 40, 0.4174}});
  EXPECT_EQ(os.str(), "cnf/S2_0.cnf stage=S2 seed=42 d=11 b=2 k=40 tau=0.417400\n");
}

TEST(Plant, ReportIsConsistent) {
  Problem prob = majority_noise_problem({5, 0.05});
  auto hc = circuit_of_majority(5);
  auto rep = plant_and_solve(prob, hc, 1, 4, 0.5, 40, 5);
  EXPECT_EQ(rep.trials, 40u);
  std::size_t hits = 0, solved = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    hits += rep.slot_hits[j];
    solved += rep.slot_solved[j];
    EXPECT_LE(rep.slot_solved[j], rep.slot_hits[j]);
  }
  EXPECT_EQ(hits, 40u);
  EXPECT_EQ(solved, rep.planted_solved);
  EXPECT_LE(rep.planted_solved, rep.solved);
  EXPECT_GT(rep.solved, 0u);
}
