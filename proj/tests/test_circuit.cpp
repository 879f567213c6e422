#include <gtest/gtest.h>

#include "compgap/base_problems.hpp"
#include "compgap/circuit.hpp"
#include "compgap/constructions.hpp"
#include "compgap/random.hpp"

using namespace compgap;

TEST(Circuit, SingleNotGate) {
  BoolCircuit c{1, {{GateKind::Not, 0, 0}}, {1}};
  EXPECT_EQ(c.evaluate(BitString::from_string("0")).to_string(), "1");
  EXPECT_EQ(c.evaluate(BitString::from_string("1")).to_string(), "0");
}

TEST(Circuit, ForwardReferenceRejected) {
  BoolCircuit c{1, {{GateKind::And, 0, 1}}, {1}};
  EXPECT_THROW(c.validate(), FormatError);
}

TEST(Circuit, MajorityAgreesOnAllInputsD7) {
  auto hc = circuit_of_majority(7);
  auto h = majority_hypothesis(7);
  for (std::uint64_t v = 0; v < 128; ++v) {
    BitString x = BitString::from_uint(v, 7);
    EXPECT_EQ(hc.classify(x), h(x));
  }
}

TEST(Circuit, MajorityAgreesExhaustivelyUpTo15) {
  for (std::size_t d : {1u, 3u, 9u, 15u}) {
    auto hc = circuit_of_majority(d);
    // 64 inputs per lane-parallel evaluation
    for (std::uint64_t base = 0; base < (std::uint64_t{1} << d); base += 64) {
      std::vector<std::uint64_t> lanes(d, 0);
      for (std::uint64_t j = 0; j < 64 && base + j < (std::uint64_t{1} << d); ++j)
        for (std::size_t i = 0; i < d; ++i) lanes[i] |= (((base + j) >> i) & 1U) << j;
      auto out = hc.circuit.evaluate_lanes(lanes);
      for (std::uint64_t j = 0; j < 64 && base + j < (std::uint64_t{1} << d); ++j) {
        int want = 2 * __builtin_popcountll(base + j) > static_cast<int>(d) ? 1 : 0;
        ASSERT_EQ(static_cast<int>((out[0] >> j) & 1U), want);
      }
    }
  }
}

TEST(Circuit, MajorityCapsAndParity) {
  EXPECT_THROW(circuit_of_majority(4), ConfigError);
  EXPECT_THROW(circuit_of_majority(kMaxMajorityCircuitInputs + 2), ConfigError);
}

TEST(Circuit, ParityChainOnEightInputs) {
  auto c = circuit_of_parity(8);
  for (std::uint64_t v = 0; v < 256; ++v) {
    EXPECT_EQ(c.evaluate(BitString::from_uint(v, 8))[0], (__builtin_popcountll(v) & 1) == 1);
  }
}

TEST(CircuitBuilder, ConstantFoldingAndSharing) {
  CircuitBuilder b(2);
  auto x = b.input(0), y = b.input(1);
  EXPECT_EQ(b.and_(x, CircuitBuilder::kFalse), CircuitBuilder::kFalse);
  EXPECT_EQ(b.or_(x, CircuitBuilder::kFalse), x);
  EXPECT_EQ(b.xor_(x, x), CircuitBuilder::kFalse);
  auto g1 = b.and_(x, y);
  auto g2 = b.and_(y, x);
  EXPECT_EQ(g1, g2);
  EXPECT_EQ(b.not_(b.not_(x)), x);
  EXPECT_EQ(b.and_(x, b.not_(x)), CircuitBuilder::kFalse);
  EXPECT_EQ(b.gate_count(), 2u);
}

TEST(CircuitBuilder, ConstantOutputsMaterialize) {
  CircuitBuilder b(1);
  b.add_output(CircuitBuilder::kTrue);
  b.add_output(CircuitBuilder::kFalse);
  auto c = b.finish();
  for (const char* s : {"0", "1"}) EXPECT_EQ(c.evaluate(BitString::from_string(s)).to_string(), "10");
}

TEST(CircuitBuilder, CountingNetworks) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t k = 0; k <= n + 1; ++k) {
      CircuitBuilder b(n);
      std::vector<CircuitBuilder::Wire> ws;
      for (std::size_t i = 0; i < n; ++i) ws.push_back(b.input(i));
      b.add_output(b.at_least(ws, k));
      b.add_output(b.at_most(ws, k));
      auto c = b.finish();
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        auto out = c.evaluate(BitString::from_uint(v, n));
        auto ones = static_cast<std::size_t>(__builtin_popcountll(v));
        ASSERT_EQ(out[0], ones >= k);
        ASSERT_EQ(out[1], ones <= k);
      }
    }
  }
}

TEST(Circuit, ToyHashCircuitMatchesSoftware) {
  Rng rng(4);
  for (std::size_t bits : {1u, 5u, 64u, 70u}) {
    for (std::size_t out : {3u, 16u, 64u, 66u}) {
      CircuitBuilder b(bits);
      std::vector<CircuitBuilder::Wire> ws;
      for (std::size_t i = 0; i < bits; ++i) ws.push_back(b.input(i));
      for (auto w : toy_hash_circuit(b, ws, out, 2)) b.add_output(w);
      auto c = b.finish();
      for (int t = 0; t < 4; ++t) {
        BitString x = random_bits(rng, bits);
        EXPECT_EQ(c.evaluate(x), toy_hash(x, out, 2)) << bits << "->" << out;
      }
    }
  }
}

TEST(Circuit, CodebookDecoderRejectsWideData) {
  CircuitBuilder b(1);
  EXPECT_THROW(codebook_decoder_circuit(b, EccParams{}, {}), ConfigError);
}

TEST(Circuit, WrappedClassifierMatchesDirectClassifier) {
  const std::size_t d = 5;
  OtsParams ots{2, 3, 2};
  EccParams ecc{4, 2, 6};
  auto hc = circuit_of_classifier_c1(d, ots, ecc);
  auto h = classifier_c1(majority_hypothesis(d), ots, ecc);
  auto p = wrapped_problem_c1(majority_noise_problem({d, 0.1}), ots, ecc);
  Rng rng(5);
  int stars = 0, labels = 0;
  for (int t = 0; t < 300; ++t) {
    BitString inst = p.sample(rng()).x;
    // honest, lightly and heavily tampered variants
    std::size_t flips = t % 3 == 0 ? 0 : t % 3 == 1 ? 1 + uniform_below(rng, 3) : uniform_below(rng, inst.size());
    for (std::size_t f = 0; f < flips; ++f) inst.flip(uniform_below(rng, inst.size()));
    Label want = h(inst);
    ASSERT_EQ(hc.classify(inst), want);
    (want.is_star() ? stars : labels)++;
  }
  EXPECT_GT(stars, 20);
  EXPECT_GT(labels, 20);
}
