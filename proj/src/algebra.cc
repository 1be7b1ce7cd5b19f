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

#include "dsa/algebra.h"

#include <sodium.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dsa/errors.h"

namespace dsa {

RingParams::RingParams(uint64_t modulus, size_t length)
    : modulus_(modulus), length_(length) {
  if (modulus < 2 || modulus > kMaxModulus) {
    throw InvalidArgumentError("modulus must lie in [2, 2^32], got " +
                               std::to_string(modulus));
  }
  if (length < 1) {
    throw InvalidArgumentError("vector length must be at least 1");
  }
}

double RingParams::bits_per_symbol() const {
  return std::log2(static_cast<double>(modulus_));
}

double RingParams::bits_per_vector() const {
  return static_cast<double>(length_) * bits_per_symbol();
}

std::string RingParams::DebugString() const {
  return "q=" + std::to_string(modulus_) + ",L=" + std::to_string(length_);
}

uint64_t RandomSource::UniformBelow(uint64_t bound) {
  if (bound == 0) throw InvalidArgumentError("UniformBelow: zero bound");
  // Reject the top partial block so that every residue is equally likely.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      (std::numeric_limits<uint64_t>::max() % bound + 1) % bound;
  while (true) {
    const uint64_t x = Next64();
    if (x <= limit) return x % bound;
  }
}

SecureRandomSource::SecureRandomSource() {
  if (sodium_init() < 0) throw DsaError("libsodium initialization failed");
}

uint64_t SecureRandomSource::Next64() {
  uint64_t x;
  randombytes_buf(&x, sizeof(x));
  return x;
}

RingVector::RingVector(RingParams params, std::vector<uint64_t> coords)
    : params_(params), coords_(std::move(coords)) {
  if (coords_.size() != params_.length()) {
    throw DimensionError("expected " + std::to_string(params_.length()) +
                         " coordinates, got " + std::to_string(coords_.size()));
  }
  for (uint64_t c : coords_) {
    if (c >= params_.modulus()) {
      throw InvalidArgumentError("coordinate " + std::to_string(c) +
                                 " not reduced mod " +
                                 std::to_string(params_.modulus()));
    }
  }
}

RingVector RingVector::Zero(const RingParams& params) {
  return RingVector(params, std::vector<uint64_t>(params.length(), 0));
}

bool RingVector::IsZero() const {
  for (uint64_t c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

std::string RingVector::DebugString() const {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) out << ",";
    out << coords_[i];
  }
  out << "]";
  return out.str();
}

namespace {

void CheckSameParams(const RingVector& a, const RingVector& b) {
  if (a.params() != b.params()) {
    throw DimensionError("ring mismatch: " + a.params().DebugString() + " vs " +
                         b.params().DebugString());
  }
}

}  // namespace

RingVector Add(const RingVector& a, const RingVector& b) {
  CheckSameParams(a, b);
  const uint64_t q = a.params().modulus();
  std::vector<uint64_t> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const uint64_t s = a[i] + b[i];
    out[i] = s >= q ? s - q : s;
  }
  return RingVector(a.params(), std::move(out));
}

RingVector Neg(const RingVector& a) {
  const uint64_t q = a.params().modulus();
  std::vector<uint64_t> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] == 0 ? 0 : q - a[i];
  }
  return RingVector(a.params(), std::move(out));
}

RingVector Sub(const RingVector& a, const RingVector& b) {
  return Add(a, Neg(b));
}

RingVector SumAll(std::span<const RingVector> vs) {
  if (vs.empty()) throw ArityError("SumAll of an empty sequence");
  RingVector acc = vs.front();
  for (size_t i = 1; i < vs.size(); ++i) acc = Add(acc, vs[i]);
  return acc;
}

RingVector SampleUniform(const RingParams& params, RandomSource& rng) {
  std::vector<uint64_t> coords(params.length());
  for (auto& c : coords) c = rng.UniformBelow(params.modulus());
  return RingVector(params, std::move(coords));
}

}  // namespace dsa
