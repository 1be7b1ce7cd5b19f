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

#include "dsa/protocol.h"

#include <vector>

#include "dsa/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dsa {
namespace {

using ::dsa::testing::Vec;

ProtocolParams Params(int k, uint64_t q, size_t l) {
  return ProtocolParams(k, 0, RingParams(q, l));
}

UserState MakeUser(int id, const ProtocolParams& p, RingVector w, RingVector z,
                   uint64_t epoch = 1) {
  return UserState(id, p, epoch, std::move(w), IndividualKey{id, std::move(z)});
}

TEST(MakeMessageTest, Examples) {
  const auto p2 = Params(3, 2, 1);
  EXPECT_EQ(MakeUser(1, p2, Vec(2, {1}), Vec(2, {1})).MakeMessage().payload,
            Vec(2, {0}));
  const auto p7 = Params(3, 7, 2);
  const auto z = Vec(7, {3, 6});
  EXPECT_EQ(MakeUser(2, p7, RingVector::Zero(p7.ring()), z).MakeMessage().payload, z);
  const auto p5 = Params(3, 5, 1);
  EXPECT_EQ(MakeUser(1, p5, Vec(5, {3}), Vec(5, {4})).MakeMessage().payload,
            Vec(5, {2}));
}

TEST(MakeMessageTest, SecondCallIsStateError) {
  const auto p = Params(3, 2, 1);
  auto u = MakeUser(1, p, Vec(2, {1}), Vec(2, {0}));
  const Message m = u.MakeMessage();
  EXPECT_EQ(m.sender, 1);
  EXPECT_EQ(m.epoch, 1u);
  EXPECT_EQ(u.phase(), Phase::kSent);
  EXPECT_THROW(u.MakeMessage(), StateError);
}

TEST(MessageTest, BitSizeIsOneInputWorth) {
  const auto p = Params(3, 65536, 32);
  auto u = MakeUser(1, p, RingVector::Zero(p.ring()), RingVector::Zero(p.ring()));
  EXPECT_DOUBLE_EQ(u.MakeMessage().bit_size(), 512.0);
}

TEST(UserStateTest, ConstructionChecks) {
  const auto p = Params(3, 2, 1);
  EXPECT_THROW(UserState(1, p, 0, Vec(2, {1}), IndividualKey{2, Vec(2, {1})}),
               InvalidArgumentError);
  EXPECT_THROW(MakeUser(4, p, Vec(2, {1}), Vec(2, {1})), InvalidArgumentError);
  EXPECT_THROW(MakeUser(1, p, Vec(3, {1}), Vec(2, {1})), DimensionError);
}

TEST(AcceptMessageTest, Bookkeeping) {
  const auto p = Params(3, 2, 1);
  auto u = MakeUser(1, p, Vec(2, {1}), Vec(2, {1}));
  u.AcceptMessage(Message{2, 1, Vec(2, {0})});
  EXPECT_EQ(u.inbox().size(), 1u);
}

TEST(AcceptMessageTest, Errors) {
  const auto p = Params(3, 2, 1);
  auto u = MakeUser(1, p, Vec(2, {1}), Vec(2, {1}));
  u.AcceptMessage(Message{2, 1, Vec(2, {0})});
  EXPECT_THROW(u.AcceptMessage(Message{2, 1, Vec(2, {1})}), DuplicateError);
  EXPECT_THROW(u.AcceptMessage(Message{1, 1, Vec(2, {1})}), RoutingError);
  EXPECT_THROW(u.AcceptMessage(Message{4, 1, Vec(2, {1})}), RoutingError);
  EXPECT_THROW(u.AcceptMessage(Message{3, 2, Vec(2, {1})}), StalenessError);
  EXPECT_THROW(u.AcceptMessage(Message{3, 1, Vec(3, {1})}), DimensionError);
  EXPECT_EQ(u.inbox().size(), 1u);
}

TEST(RecoverSumTest, ExampleOne) {
  // W = (1, 0, 1), N = (1, 0) so Z = (1, 0, 1) and X = (0, 0, 0).
  const auto p = Params(3, 2, 1);
  const std::vector<RingVector> w = {Vec(2, {1}), Vec(2, {0}), Vec(2, {1})};
  const auto keys = DeriveKeys(SourceKey(p, {Vec(2, {1}), Vec(2, {0})}));
  std::vector<UserState> users;
  std::vector<Message> msgs;
  for (int k = 1; k <= 3; ++k) {
    users.emplace_back(k, p, 1, w[k - 1], keys[k - 1]);
    msgs.push_back(users.back().MakeMessage());
    EXPECT_EQ(msgs.back().payload, Vec(2, {0}));
  }
  for (auto& u : users) {
    for (const auto& m : msgs) {
      if (m.sender != u.user_id()) u.AcceptMessage(m);
    }
    const AggregateResult r = u.RecoverSum();
    EXPECT_EQ(r.value, Vec(2, {0}));
    EXPECT_EQ(r.recovered_by, u.user_id());
    EXPECT_EQ(u.phase(), Phase::kRecovered);
  }
}

TEST(RecoverSumTest, PhaseAndReadinessErrors) {
  const auto p = Params(3, 2, 1);
  auto u = MakeUser(1, p, Vec(2, {1}), Vec(2, {1}));
  EXPECT_THROW(u.RecoverSum(), StateError);
  u.MakeMessage();
  u.AcceptMessage(Message{2, 1, Vec(2, {0})});
  EXPECT_THROW(u.RecoverSum(), NotReadyError);
  u.AcceptMessage(Message{3, 1, Vec(2, {0})});
  u.RecoverSum();
  EXPECT_THROW(u.RecoverSum(), StateError);
  EXPECT_THROW(u.AcceptMessage(Message{2, 1, Vec(2, {0})}), StateError);
}

// Runs one round by hand and returns every user's result.
std::vector<RingVector> RunRound(const ProtocolParams& p,
                                 const std::vector<RingVector>& inputs,
                                 const SourceKey& src) {
  const auto keys = DeriveKeys(src);
  std::vector<UserState> users;
  std::vector<Message> msgs;
  for (int k = 1; k <= p.users(); ++k) {
    users.emplace_back(k, p, 5, inputs[k - 1], keys[k - 1]);
    msgs.push_back(users.back().MakeMessage());
  }
  std::vector<RingVector> out;
  for (auto& u : users) {
    for (const auto& m : msgs) {
      if (m.sender != u.user_id()) u.AcceptMessage(m);
    }
    out.push_back(u.RecoverSum().value);
  }
  return out;
}

TEST(RecoverSumTest, AllZeroInputsGiveZero) {
  const auto p = Params(4, 11, 3);
  DeterministicRandomSource rng(1);
  const auto zero = RingVector::Zero(p.ring());
  for (const auto& r : RunRound(p, {zero, zero, zero, zero}, GenSourceKey(p, rng))) {
    EXPECT_EQ(r, zero);
  }
}

// Every input and key assignment at q = 2, L = 1.
TEST(RecoveryProperty, ExhaustiveBinary) {
  for (int k_users : {3, 4, 5}) {
    const auto p = Params(k_users, 2, 1);
    const uint64_t worlds = uint64_t{1} << (2 * k_users - 1);
    for (uint64_t idx = 0; idx < worlds; ++idx) {
      std::vector<RingVector> w, n;
      uint64_t expected = 0;
      for (int i = 0; i < k_users; ++i) {
        const uint64_t bit = (idx >> i) & 1;
        w.push_back(Vec(2, {bit}));
        expected ^= bit;
      }
      for (int i = 0; i + 1 < k_users; ++i) n.push_back(Vec(2, {(idx >> (k_users + i)) & 1}));
      for (const auto& r : RunRound(p, w, SourceKey(p, n))) {
        ASSERT_EQ(r, Vec(2, {expected})) << "K=" << k_users << " world " << idx;
      }
    }
  }
}

TEST(RecoveryProperty, RandomTrialsMatchPlaintextSum) {
  DeterministicRandomSource rng(2);
  const auto p = Params(4, 7, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RingVector> w;
    for (int k = 0; k < 4; ++k) w.push_back(SampleUniform(p.ring(), rng));
    const auto expected = SumAll(w);
    for (const auto& r : RunRound(p, w, GenSourceKey(p, rng))) ASSERT_EQ(r, expected);
  }
}

TEST(WireTest, GoldenEncoding) {
  const Message m{3, 0x0102, Vec(7, {5, 6})};
  const std::vector<uint8_t> golden = {
      'D', 'S', 'A', '1',
      0x02, 0x01, 0, 0, 0, 0, 0, 0,  // epoch 0x0102
      0x03, 0,                       // sender 3
      0x07, 0, 0, 0, 0, 0, 0, 0,     // q = 7
      0x02, 0, 0, 0,                 // L = 2
      0x05, 0, 0, 0, 0, 0, 0, 0,     // symbol 5
      0x06, 0, 0, 0, 0, 0, 0, 0,     // symbol 6
  };
  EXPECT_EQ(EncodeMessage(m), golden);
  EXPECT_EQ(DecodeMessage(golden), m);
}

TEST(WireTest, RoundTripProperty) {
  DeterministicRandomSource rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const RingParams ring = testing::RandomParams(rng);
    const Message m{1 + static_cast<int>(rng.UniformBelow(65535)), rng.Next64(),
                    SampleUniform(ring, rng)};
    const auto bytes = EncodeMessage(m);
    ASSERT_EQ(bytes.size(), 26 + 8 * ring.length());
    ASSERT_EQ(DecodeMessage(bytes), m);
  }
}

TEST(WireTest, MalformedIsParseError) {
  const auto good = EncodeMessage(Message{1, 1, Vec(5, {4})});
  auto bad_magic = good;
  bad_magic[3] = '2';
  EXPECT_THROW(DecodeMessage(bad_magic), ParseError);
  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW(DecodeMessage(truncated), ParseError);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(DecodeMessage(trailing), ParseError);
  auto unreduced = good;
  unreduced[26] = 5;
  EXPECT_THROW(DecodeMessage(unreduced), ParseError);
  EXPECT_THROW(DecodeMessage(std::vector<uint8_t>{'D', 'S'}), ParseError);
}

}  // namespace
}  // namespace dsa
