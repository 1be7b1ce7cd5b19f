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

#include <algorithm>
#include <string>
#include <utility>

#include "bytes.h"
#include "dsa/errors.h"

namespace dsa {

std::vector<uint8_t> EncodeMessage(const Message& m) {
  std::vector<uint8_t> out(kWireMagic.begin(), kWireMagic.end());
  internal::PutLe(out, m.epoch, 8);
  internal::PutLe(out, static_cast<uint64_t>(m.sender), 2);
  internal::PutLe(out, m.payload.params().modulus(), 8);
  internal::PutLe(out, m.payload.size(), 4);
  for (uint64_t c : m.payload.coords()) internal::PutLe(out, c, 8);
  return out;
}

Message DecodeMessage(std::span<const uint8_t> bytes) {
  internal::LeReader in(bytes, "message");
  auto magic = in.Take(kWireMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kWireMagic.begin())) {
    throw ParseError("message: bad magic");
  }
  const uint64_t epoch = in.Get(8);
  const int sender = static_cast<int>(in.Get(2));
  const uint64_t modulus = in.Get(8);
  const uint64_t length = in.Get(4);
  if (in.remaining() != length * 8) {
    throw ParseError("message: payload is " + std::to_string(in.remaining()) +
                     " bytes, header declares " + std::to_string(length * 8));
  }
  std::vector<uint64_t> coords(length);
  for (auto& c : coords) c = in.Get(8);
  try {
    return Message{sender, epoch,
                   RingVector(RingParams(modulus, length), std::move(coords))};
  } catch (const ParseError&) {
    throw;
  } catch (const DsaError& e) {
    throw ParseError(std::string("message: ") + e.what());
  }
}

RingVector MaskInput(const RingVector& input, const RingVector& mask) {
  return Add(input, mask);
}

std::string_view PhaseName(Phase p) {
  switch (p) {
    case Phase::kIdle:
      return "Idle";
    case Phase::kSent:
      return "Sent";
    case Phase::kRecovered:
      return "Recovered";
  }
  return "?";
}

UserState::UserState(int user_id, ProtocolParams params, uint64_t epoch,
                     RingVector input, IndividualKey key)
    : user_id_(user_id),
      params_(params),
      epoch_(epoch),
      input_(std::move(input)),
      key_(std::move(key)) {
  if (user_id < 1 || user_id > params_.users()) {
    throw InvalidArgumentError("user id " + std::to_string(user_id) +
                               " outside [1, " +
                               std::to_string(params_.users()) + "]");
  }
  if (key_.owner != user_id) {
    throw InvalidArgumentError("key owned by user " +
                               std::to_string(key_.owner) + " handed to user " +
                               std::to_string(user_id));
  }
  if (input_.params() != params_.ring() ||
      key_.mask.params() != params_.ring()) {
    throw DimensionError("input or key not over " +
                         params_.ring().DebugString());
  }
}

Message UserState::MakeMessage() {
  if (phase_ != Phase::kIdle) {
    throw StateError("user " + std::to_string(user_id_) +
                     " already broadcast in epoch " + std::to_string(epoch_));
  }
  phase_ = Phase::kSent;
  return Message{user_id_, epoch_, MaskInput(input_, key_.mask)};
}

void UserState::AcceptMessage(const Message& m) {
  if (phase_ == Phase::kRecovered) {
    throw StateError("user " + std::to_string(user_id_) +
                     " already recovered the sum");
  }
  if (m.sender == user_id_) {
    throw RoutingError("user " + std::to_string(user_id_) +
                       " received its own broadcast");
  }
  if (m.sender < 1 || m.sender > params_.users()) {
    throw RoutingError("unknown sender " + std::to_string(m.sender));
  }
  if (m.epoch != epoch_) {
    throw StalenessError("message from user " + std::to_string(m.sender) +
                         " carries epoch " + std::to_string(m.epoch) +
                         ", expected " + std::to_string(epoch_));
  }
  if (m.payload.params() != params_.ring()) {
    throw DimensionError("payload from user " + std::to_string(m.sender) +
                         " not over " + params_.ring().DebugString());
  }
  if (!inbox_.emplace(m.sender, m).second) {
    throw DuplicateError("second message from user " +
                         std::to_string(m.sender));
  }
}

AggregateResult UserState::RecoverSum() {
  if (phase_ != Phase::kSent) {
    throw StateError("user " + std::to_string(user_id_) +
                     " cannot recover in phase " +
                     std::string(PhaseName(phase_)));
  }
  const size_t expected = static_cast<size_t>(params_.users() - 1);
  if (inbox_.size() != expected) {
    throw NotReadyError("user " + std::to_string(user_id_) + " holds " +
                        std::to_string(inbox_.size()) + " of " +
                        std::to_string(expected) + " messages");
  }
  RingVector acc = Add(input_, key_.mask);
  for (const auto& [sender, m] : inbox_) acc = Add(acc, m.payload);
  phase_ = Phase::kRecovered;
  return AggregateResult{std::move(acc), user_id_};
}

}  // namespace dsa
