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

#ifndef DSA_PROTOCOL_H_
#define DSA_PROTOCOL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "dsa/algebra.h"
#include "dsa/keying.h"

namespace dsa {

// A user's broadcast X_k = W_k + Z_k.
struct Message {
  int sender;
  uint64_t epoch;
  RingVector payload;

  // L * log2(q).
  double bit_size() const { return payload.params().bits_per_vector(); }

  friend bool operator==(const Message&, const Message&) = default;
};

// Wire encoding:
//   "DSA1" | epoch (u64 LE) | sender (u16 LE) | q (u64 LE) | L (u32 LE)
//   | L x symbol (u64 LE)
inline constexpr std::string_view kWireMagic = "DSA1";

std::vector<uint8_t> EncodeMessage(const Message& m);

// Throws ParseError on bad magic, truncation, trailing bytes or unreduced
// symbols.
Message DecodeMessage(std::span<const uint8_t> bytes);

// X = W + Z, the masking rule behind UserState::MakeMessage.
RingVector MaskInput(const RingVector& input, const RingVector& mask);

struct AggregateResult {
  RingVector value;
  int recovered_by;

  friend bool operator==(const AggregateResult&,
                         const AggregateResult&) = default;
};

enum class Phase { kIdle, kSent, kRecovered };

std::string_view PhaseName(Phase p);

// One user's view of a single aggregation round. Single-owner; the phase only
// moves Idle -> Sent -> Recovered.
class UserState {
 public:
  // Throws InvalidArgumentError if key.owner != user_id or the id is out of
  // range, DimensionError if input or key live in another ring.
  UserState(int user_id, ProtocolParams params, uint64_t epoch,
            RingVector input, IndividualKey key);

  int user_id() const { return user_id_; }
  const ProtocolParams& params() const { return params_; }
  uint64_t epoch() const { return epoch_; }
  const RingVector& input() const { return input_; }
  const IndividualKey& key() const { return key_; }
  Phase phase() const { return phase_; }
  const std::map<int, Message>& inbox() const { return inbox_; }

  // X_k = W_k + Z_k; Idle -> Sent. A second call throws StateError since the
  // key must mask exactly one payload.
  Message MakeMessage();

  // Files a peer's broadcast. Throws RoutingError for self or unknown senders,
  // StalenessError on an epoch mismatch, DuplicateError for a repeated sender,
  // DimensionError on a ring mismatch and StateError after recovery.
  void AcceptMessage(const Message& m);

  // W_k + Z_k + sum of the K-1 received payloads; Sent -> Recovered. Throws
  // StateError unless Sent and NotReadyError while peers are missing.
  AggregateResult RecoverSum();

 private:
  int user_id_;
  ProtocolParams params_;
  uint64_t epoch_;
  RingVector input_;
  IndividualKey key_;
  Phase phase_ = Phase::kIdle;
  std::map<int, Message> inbox_;
};

}  // namespace dsa

#endif  // DSA_PROTOCOL_H_
