/*
 * Copyright 2026 The DSA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dsa/oracle.h"

#include <cmath>
#include <vector>

#include "dsa/errors.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dsa {
namespace {

using ::dsa::testing::BruteEntropy;
using ::dsa::testing::BruteMi;
using ::dsa::testing::BruteWorld;
using ::testing::HasSubstr;

ProtocolParams Params(int k, int t, uint64_t q, size_t l) {
  return ProtocolParams(k, t, RingParams(q, l));
}

std::vector<uint64_t> Codes(const JointDistribution& d) {
  std::vector<uint64_t> out;
  for (const auto& [key, count] : d.cells()) out.push_back(count);
  return out;
}

TEST(WorldSpaceTest, CountsAndBudget) {
  EXPECT_EQ(WorldSpace(Params(3, 0, 2, 1)).world_count(), 32u);
  EXPECT_EQ(WorldSpace(Params(4, 1, 2, 1)).world_count(), 128u);
  EXPECT_EQ(WorldSpace(Params(3, 0, 3, 1)).world_count(), 243u);
  EXPECT_EQ(WorldSpace(Params(4, 0, 2, 1), ZeroKeyScheme()).world_count(), 16u);
  try {
    WorldSpace(Params(8, 0, 2, 4));
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_THAT(e.what(), HasSubstr("2^60 = 1152921504606846976"));
  }
  EXPECT_THROW(WorldSpace(Params(3, 0, 2, 1), OptimalScheme(), 31), BudgetError);
  EXPECT_NO_THROW(WorldSpace(Params(3, 0, 2, 1), OptimalScheme(), 32));
}

TEST(WorldSpaceTest, AtomsFollowTheConstruction) {
  const WorldSpace space(Params(4, 0, 2, 2));
  for (uint64_t w = 0; w < space.world_count(); w += 37) {
    std::vector<RingVector> inputs, keys;
    for (int k = 1; k <= 4; ++k) {
      inputs.push_back(space.AtomVector(space.AtomValue(w, {AtomKind::kInput, k})));
      keys.push_back(space.AtomVector(space.AtomValue(w, {AtomKind::kKey, k})));
      const auto x = space.AtomVector(space.AtomValue(w, {AtomKind::kMessage, k}));
      ASSERT_EQ(x, inputs.back() + keys.back());
    }
    for (int i = 1; i <= 3; ++i) {
      ASSERT_EQ(space.AtomValue(w, {AtomKind::kNoise, i}),
                space.AtomValue(w, {AtomKind::kKey, i}));
    }
    ASSERT_TRUE(SumAll(keys).IsZero());
    ASSERT_EQ(space.AtomVector(space.AtomValue(w, {AtomKind::kSum, 0})), SumAll(inputs));
  }
  EXPECT_THROW(space.AtomValue(0, {AtomKind::kNoise, 4}), SpecError);
  EXPECT_THROW(space.AtomValue(0, {AtomKind::kInput, 0}), SpecError);
}

TEST(TabulateTest, MessageIsUniform) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::X(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_EQ(d.total(), 32u);
  // Frozen from a brute-force count over the 32 worlds.
  EXPECT_EQ(Codes(d), (std::vector<uint64_t>{16, 16}));
}

TEST(TabulateTest, DuplicateVariableHasDiagonalSupport) {
  const WorldSpace space(Params(3, 0, 3, 1));
  const std::vector<VariableSpec> vars = {var::W(1), var::Tuple("W1'", {var::W(1)})};
  const auto d = Tabulate(space, vars);
  EXPECT_EQ(d.cells().size(), 3u);
  for (const auto& [key, count] : d.cells()) EXPECT_EQ(key[0], key[1]);
}

TEST(TabulateTest, KeysSupportedOnZeroSumTriples) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::Z(1), var::Z(2), var::Z(3)};
  const auto d = Tabulate(space, vars);
  ASSERT_EQ(d.cells().size(), 4u);
  for (const auto& [key, count] : d.cells()) {
    EXPECT_EQ((key[0] + key[1] + key[2]) % 2, 0u);
    EXPECT_EQ(count, 8u);
  }
}

TEST(TabulateTest, PartitioningDoesNotChangeCounts) {
  const WorldSpace space(Params(4, 1, 3, 1), OptimalScheme(), kDefaultWorldBudget, 3);
  const WorldSpace serial(Params(4, 1, 3, 1));
  const std::vector<int> s = {2, 3};
  const std::vector<VariableSpec> vars = {var::Messages(s), var::Collection(s), var::SumW()};
  const auto base = Tabulate(serial, vars, 1);
  for (int workers : {2, 5, 7}) {
    const auto d = Tabulate(space, vars, workers);
    EXPECT_EQ(d.cells(), base.cells()) << workers;
  }
}

TEST(TabulateTest, UnknownAtomIsSpecError) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::W(4)};
  EXPECT_THROW(Tabulate(space, vars), SpecError);
}

TEST(TabulateTest, MarginalsOfInputsAndNoiseAreUniform) {
  const WorldSpace space(Params(4, 0, 3, 1));
  std::vector<VariableSpec> vars;
  for (int k = 1; k <= 4; ++k) vars.push_back(var::W(k));
  for (int i = 1; i <= 3; ++i) vars.push_back(var::N(i));
  const auto d = Tabulate(space, vars);
  for (size_t i = 0; i < vars.size(); ++i) {
    const auto m = d.Marginal(std::vector<size_t>{i});
    ASSERT_EQ(m.size(), 3u);
    for (const auto& [v, c] : m) EXPECT_EQ(c, d.total() / 3) << vars[i].name;
  }
}

TEST(EntropyBitsTest, Examples) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::W(1), var::Z(1), var::Z(2), var::Z(3)};
  const auto d = Tabulate(space, vars);
  EXPECT_NEAR(EntropyBits(d, {"W1"}), 1.0, 1e-12);
  EXPECT_NEAR(EntropyBits(d, {"Z1", "Z2", "Z3"}), 2.0, 1e-12);
  EXPECT_NEAR(EntropyBits(d, {"W1"}, {"W1"}), 0.0, 1e-12);
  EXPECT_THROW(EntropyBits(d, {"Q7"}), SpecError);
}

TEST(EntropyBitsTest, AgreesWithBruteForce) {
  const WorldSpace space(Params(4, 0, 3, 1));
  const std::vector<VariableSpec> vars = {var::X(1), var::X(2), var::Z(4), var::SumW()};
  const auto d = Tabulate(space, vars);
  const double brute = BruteEntropy(4, 3, [](const BruteWorld& bw) {
    return std::vector<uint64_t>{bw.x[0], bw.x[1], bw.z[3], bw.sum};
  });
  EXPECT_NEAR(EntropyBits(d, {"X1", "X2", "Z4", "SumW"}), brute, 1e-9);
}

TEST(ConditionalMiTest, OneTimePadIsPerfectlySecret) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::X(1), var::W(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_TRUE(ConditionalMiIsZero(d, {"X1"}, {"W1"}));
  EXPECT_NEAR(ConditionalMiBits(d, {"X1"}, {"W1"}), 0.0, 1e-12);
}

TEST(ConditionalMiTest, SelfDependenceIsNotZero) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::W(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_FALSE(ConditionalMiIsZero(d, {"W1"}, {"W1"}));
  EXPECT_NEAR(ConditionalMiBits(d, {"W1"}, {"W1"}), 1.0, 1e-12);
}

TEST(ConditionalMiTest, UnmaskedCopyLeaksOneBit) {
  const WorldSpace space(Params(3, 0, 2, 1), ZeroKeyScheme());
  const std::vector<VariableSpec> vars = {var::X(1), var::W(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_NEAR(ConditionalMiBits(d, {"X1"}, {"W1"}), 1.0, 1e-12);
  EXPECT_FALSE(ConditionalMiIsZero(d, {"X1"}, {"W1"}));
}

TEST(ConditionalMiTest, IndependentBitsHaveZeroMi) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::W(1), var::W(2)};
  const auto d = Tabulate(space, vars);
  EXPECT_NEAR(ConditionalMiBits(d, {"W1"}, {"W2"}), 0.0, 1e-12);
  EXPECT_TRUE(ConditionalMiIsZero(d, {"W1"}, {"W2"}));
}

TEST(ConditionalMiTest, SecurityInstanceForUserOne) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<int> others = {2, 3};
  const std::vector<VariableSpec> vars = {
      var::Messages(others), var::Inputs(others), var::SumW(), var::W(1), var::Z(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_TRUE(ConditionalMiIsZero(d, {"X{2,3}"}, {"W{2,3}"}, {"SumW", "W1", "Z1"}));
}

TEST(ConditionalMiTest, MessagesRevealExactlyTheSum) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<int> others = {2, 3};
  const std::vector<VariableSpec> vars = {var::Messages(others), var::Inputs(others),
                                          var::W(1), var::Z(1)};
  const auto d = Tabulate(space, vars);
  const double mi = ConditionalMiBits(d, {"X{2,3}"}, {"W{2,3}"}, {"W1", "Z1"});
  const double brute = BruteMi(
      3, 2, [](const BruteWorld& bw) { return std::vector<uint64_t>{bw.x[1], bw.x[2]}; },
      [](const BruteWorld& bw) { return std::vector<uint64_t>{bw.w[1], bw.w[2]}; },
      [](const BruteWorld& bw) { return std::vector<uint64_t>{bw.w[0], bw.z[0]}; });
  EXPECT_NEAR(brute, 1.0, 1e-12);
  EXPECT_NEAR(mi, 1.0, 1e-9);
}

// The exact test and the float MI agree, and the float MI is never negative.
TEST(OracleProperty, ChainRuleNonnegativityAndAgreement) {
  const WorldSpace space(Params(4, 1, 2, 1));
  std::vector<VariableSpec> vars;
  for (int k = 1; k <= 4; ++k) {
    vars.push_back(var::W(k));
    vars.push_back(var::Z(k));
    vars.push_back(var::X(k));
  }
  vars.push_back(var::SumW());
  const auto d = Tabulate(space, vars);
  DeterministicRandomSource rng(17);
  auto pick = [&] {
    VarNames names;
    for (const auto& v : vars) {
      if (rng.UniformBelow(4) == 0) names.push_back(v.name);
    }
    return names;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const VarNames a = pick(), b = pick(), g = pick();
    VarNames ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    ASSERT_NEAR(EntropyBits(d, ab), EntropyBits(d, a) + EntropyBits(d, b, a), 1e-9);
    ASSERT_GE(EntropyBits(d, a, g), -1e-12);
    const double mi = ConditionalMiBits(d, a, b, g);
    ASSERT_GE(mi, -1e-12);
    ASSERT_EQ(ConditionalMiIsZero(d, a, b, g), mi < 1e-9);
  }
}

// Six copies of a 12-atom tuple need 72 bits per cell key, which takes the
// unpacked counting path; it must agree with the packed one.
TEST(OracleProperty, WideKeysMatchPackedKeys) {
  const WorldSpace space(Params(4, 0, 2, 1));
  std::vector<VariableSpec> atoms;
  for (int k = 1; k <= 4; ++k) {
    atoms.push_back(var::W(k));
    atoms.push_back(var::Z(k));
    atoms.push_back(var::X(k));
  }
  const VariableSpec all = var::Tuple("All", atoms);
  std::vector<VariableSpec> wide;
  for (int i = 0; i < 6; ++i) wide.push_back(var::Tuple("T" + std::to_string(i), {all}));
  std::vector<VariableSpec> narrow = {var::X(1), var::W(1), var::W(2), var::SumW()};
  std::vector<VariableSpec> mixed = narrow;
  mixed.insert(mixed.end(), wide.begin(), wide.end());

  const auto packed = Tabulate(space, narrow);
  const auto unpacked = Tabulate(space, mixed, 3);
  ASSERT_FALSE(unpacked.Cardinality(std::vector<size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  const std::vector<size_t> first = {0, 1, 2, 3};
  EXPECT_EQ(unpacked.Marginal(first), packed.cells());
  EXPECT_NEAR(EntropyBits(unpacked, {"T0", "T1", "T2", "T3", "T4", "T5"}), 7.0, 1e-12);
  EXPECT_TRUE(IsDetermined(unpacked, {"X1", "SumW"}, {"T0", "T1", "T2", "T3", "T4", "T5"}));
  EXPECT_FALSE(IsDetermined(unpacked, {"T0", "T1", "T2", "T3", "T4", "T5"}, {"X1"}));
  const VarNames copies = {"T0", "T1", "T2", "T3", "T4", "T5"};
  EXPECT_NEAR(EntropyBits(unpacked, {"X1"}, copies), 0.0, 1e-12);
  EXPECT_TRUE(ConditionalMiIsZero(unpacked, {"X1"}, {"W2"}, copies));
  EXPECT_FALSE(ConditionalMiIsZero(unpacked, {"W1"}, copies));
  EXPECT_NEAR(ConditionalMiBits(unpacked, {"W1"}, copies), 1.0, 1e-12);
}

TEST(IsDeterminedTest, SumFromMessagesAndOwnView) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::SumW(), var::X(2), var::X(3), var::W(1),
                                          var::Z(1)};
  const auto d = Tabulate(space, vars);
  EXPECT_TRUE(IsDetermined(d, {"SumW"}, {"X2", "X3", "W1", "Z1"}));
  EXPECT_FALSE(IsDetermined(d, {"SumW"}, {"X2", "X3", "W1"}));
}

TEST(DumpTest, DeterministicTable) {
  const WorldSpace space(Params(3, 0, 2, 1));
  const std::vector<VariableSpec> vars = {var::Z(1), var::Keys(std::vector<int>{2, 3})};
  const auto d = Tabulate(space, vars);
  EXPECT_EQ(d.Dump(),
            "# dsa-distribution v1 total=32\n"
            "Z1=0 Z{2,3}=(0,0) count=8\n"
            "Z1=0 Z{2,3}=(1,1) count=8\n"
            "Z1=1 Z{2,3}=(0,1) count=8\n"
            "Z1=1 Z{2,3}=(1,0) count=8\n");
}

}  // namespace
}  // namespace dsa
