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

#ifndef DSA_KEYING_H_
#define DSA_KEYING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsa/algebra.h"

namespace dsa {

// True when K = 2 or T >= K - 2. In that regime the recovered sum together with
// the colluders' view pins down every remaining input.
bool IsTrivialRegime(int users, int collusion);

// Human-readable reason attached to TrivialRegimeError.
std::string TrivialRegimeExplanation(int users, int collusion);

// K users, collusion threshold T, and the ring every vector lives in.
class ProtocolParams {
 public:
  // Throws InvalidArgumentError for K < 2 or T < 0, and TrivialRegimeError for
  // K = 2 or T > K - 3.
  ProtocolParams(int users, int collusion, RingParams ring);

  int users() const { return users_; }
  int collusion() const { return collusion_; }
  const RingParams& ring() const { return ring_; }

  friend bool operator==(const ProtocolParams&,
                         const ProtocolParams&) = default;

  std::string DebugString() const;

 private:
  int users_;
  int collusion_;
  RingParams ring_;
};

// The dealer's randomness N_1..N_{K-1}.
class SourceKey {
 public:
  // Throws ArityError unless noise.size() == K - 1, DimensionError on a ring
  // mismatch.
  SourceKey(ProtocolParams params, std::vector<RingVector> noise);

  const ProtocolParams& params() const { return params_; }
  const std::vector<RingVector>& noise() const { return noise_; }

  // (K - 1) * L * log2(q).
  double bit_size() const;

  friend bool operator==(const SourceKey&, const SourceKey&) = default;

 private:
  ProtocolParams params_;
  std::vector<RingVector> noise_;
};

struct IndividualKey {
  int owner;  // 1-based user index
  RingVector mask;

  friend bool operator==(const IndividualKey&, const IndividualKey&) = default;
};

// K - 1 independent uniform vectors.
SourceKey GenSourceKey(const ProtocolParams& params, RandomSource& rng);

// Z_k = N_k for k < K and Z_K = -(N_1 + ... + N_{K-1}).
std::vector<IndividualKey> DeriveKeys(const SourceKey& src);

// True iff the masks sum to zero. Throws ArityError unless exactly K keys are
// given.
bool KeyZeroSumCheck(const ProtocolParams& params,
                     std::span<const IndividualKey> keys);

// Key-file records. Each record is
//   epoch (u64 LE) | owner (u16 LE) | L (u32 LE) | q (u64 LE) | L x u64 LE
// and a file is the concatenation of K records.
struct KeyRecord {
  uint64_t epoch;
  IndividualKey key;

  friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

std::vector<uint8_t> EncodeKeyRecords(uint64_t epoch,
                                      std::span<const IndividualKey> keys);

// Throws ParseError on truncated input or malformed fields.
std::vector<KeyRecord> DecodeKeyRecords(std::span<const uint8_t> bytes);

void WriteKeyFile(const std::string& path, uint64_t epoch,
                  std::span<const IndividualKey> keys);
std::vector<KeyRecord> ReadKeyFile(const std::string& path);

}  // namespace dsa

#endif  // DSA_KEYING_H_
