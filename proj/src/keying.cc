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

#include "dsa/keying.h"

#include <fstream>
#include <iterator>
#include <utility>

#include "bytes.h"
#include "dsa/errors.h"

namespace dsa {

bool IsTrivialRegime(int users, int collusion) {
  return users == 2 || collusion >= users - 2;
}

std::string TrivialRegimeExplanation(int users, int collusion) {
  std::string why =
      users == 2
          ? "with two users the sum hands each user the other's input"
          : "a user colluding with T >= K-2 others is left with a single "
            "unknown input, which the sum reveals";
  return "trivial regime (K=" + std::to_string(users) +
         ", T=" + std::to_string(collusion) + "): " + why +
         "; no input can be protected. Require K >= 3 and T <= K-3.";
}

ProtocolParams::ProtocolParams(int users, int collusion, RingParams ring)
    : users_(users), collusion_(collusion), ring_(ring) {
  if (users < 2) {
    throw InvalidArgumentError("need at least 2 users, got " +
                               std::to_string(users));
  }
  if (collusion < 0) {
    throw InvalidArgumentError("collusion threshold must be nonnegative");
  }
  if (users > 0xFFFF) {
    throw InvalidArgumentError("user ids must fit in 16 bits");
  }
  if (IsTrivialRegime(users, collusion)) {
    throw TrivialRegimeError(TrivialRegimeExplanation(users, collusion));
  }
}

std::string ProtocolParams::DebugString() const {
  return "K=" + std::to_string(users_) + ",T=" + std::to_string(collusion_) +
         "," + ring_.DebugString();
}

SourceKey::SourceKey(ProtocolParams params, std::vector<RingVector> noise)
    : params_(params), noise_(std::move(noise)) {
  if (noise_.size() != static_cast<size_t>(params_.users() - 1)) {
    throw ArityError("source key needs K-1=" +
                     std::to_string(params_.users() - 1) + " vectors, got " +
                     std::to_string(noise_.size()));
  }
  for (const auto& n : noise_) {
    if (n.params() != params_.ring()) {
      throw DimensionError("source key vector over " + n.params().DebugString() +
                           ", expected " + params_.ring().DebugString());
    }
  }
}

double SourceKey::bit_size() const {
  return static_cast<double>(noise_.size()) * params_.ring().bits_per_vector();
}

SourceKey GenSourceKey(const ProtocolParams& params, RandomSource& rng) {
  std::vector<RingVector> noise;
  noise.reserve(params.users() - 1);
  for (int i = 0; i + 1 < params.users(); ++i) {
    noise.push_back(SampleUniform(params.ring(), rng));
  }
  return SourceKey(params, std::move(noise));
}

std::vector<IndividualKey> DeriveKeys(const SourceKey& src) {
  const auto& noise = src.noise();
  std::vector<IndividualKey> keys;
  keys.reserve(noise.size() + 1);
  for (size_t i = 0; i < noise.size(); ++i) {
    keys.push_back({static_cast<int>(i) + 1, noise[i]});
  }
  keys.push_back({src.params().users(), Neg(SumAll(noise))});
  return keys;
}

bool KeyZeroSumCheck(const ProtocolParams& params,
                     std::span<const IndividualKey> keys) {
  if (keys.size() != static_cast<size_t>(params.users())) {
    throw ArityError("expected " + std::to_string(params.users()) +
                     " keys, got " + std::to_string(keys.size()));
  }
  RingVector acc = RingVector::Zero(params.ring());
  for (const auto& k : keys) acc = Add(acc, k.mask);
  return acc.IsZero();
}

std::vector<uint8_t> EncodeKeyRecords(uint64_t epoch,
                                      std::span<const IndividualKey> keys) {
  std::vector<uint8_t> out;
  for (const auto& k : keys) {
    internal::PutLe(out, epoch, 8);
    internal::PutLe(out, static_cast<uint64_t>(k.owner), 2);
    internal::PutLe(out, k.mask.size(), 4);
    internal::PutLe(out, k.mask.params().modulus(), 8);
    for (uint64_t c : k.mask.coords()) internal::PutLe(out, c, 8);
  }
  return out;
}

std::vector<KeyRecord> DecodeKeyRecords(std::span<const uint8_t> bytes) {
  internal::LeReader in(bytes, "key file");
  std::vector<KeyRecord> records;
  while (!in.done()) {
    const uint64_t epoch = in.Get(8);
    const int owner = static_cast<int>(in.Get(2));
    const uint64_t length = in.Get(4);
    const uint64_t modulus = in.Get(8);
    if (owner == 0) throw ParseError("key file: owner index 0");
    if (length > in.remaining() / 8) {
      throw ParseError("key file: declared length exceeds file size");
    }
    std::vector<uint64_t> coords(length);
    for (auto& c : coords) c = in.Get(8);
    try {
      records.push_back(
          {epoch, {owner, RingVector(RingParams(modulus, length), coords)}});
    } catch (const DsaError& e) {
      throw ParseError(std::string("key file: ") + e.what());
    }
  }
  return records;
}

void WriteKeyFile(const std::string& path, uint64_t epoch,
                  std::span<const IndividualKey> keys) {
  const auto bytes = EncodeKeyRecords(epoch, keys);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DsaError("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<KeyRecord> ReadKeyFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DsaError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return DecodeKeyRecords(bytes);
}

}  // namespace dsa
