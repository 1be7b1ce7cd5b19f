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

#ifndef DSA_ALGEBRA_H_
#define DSA_ALGEBRA_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dsa {

// Largest supported modulus. Residues are stored in 64 bits, so the sum of two
// residues never overflows.
inline constexpr uint64_t kMaxModulus = uint64_t{1} << 32;

// Shape of the additive group (Z_q)^L.
class RingParams {
 public:
  // Throws InvalidArgumentError unless q >= 2, q <= kMaxModulus and L >= 1.
  RingParams(uint64_t modulus, size_t length);

  uint64_t modulus() const { return modulus_; }
  size_t length() const { return length_; }

  // log2(q); not an integer unless q is a power of two.
  double bits_per_symbol() const;
  // L * log2(q).
  double bits_per_vector() const;

  friend bool operator==(const RingParams&, const RingParams&) = default;

  std::string DebugString() const;

 private:
  uint64_t modulus_;
  size_t length_;
};

// Source of uniform 64-bit words. Instances are single-owner.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual uint64_t Next64() = 0;

  // Uniform on [0, bound) by rejection sampling; bound must be nonzero.
  uint64_t UniformBelow(uint64_t bound);
};

// Reproducible generator for tests and simulations: std::mt19937_64, whose
// output sequence is fixed by the C++ standard, consumed one word per draw.
class DeterministicRandomSource final : public RandomSource {
 public:
  explicit DeterministicRandomSource(uint64_t seed) : engine_(seed) {}

  uint64_t Next64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Cryptographically strong generator backed by libsodium.
class SecureRandomSource final : public RandomSource {
 public:
  SecureRandomSource();

  uint64_t Next64() override;
};

// An element of (Z_q)^L. Immutable once built.
class RingVector {
 public:
  // Throws DimensionError if coords.size() != L and InvalidArgumentError if a
  // coordinate is not reduced.
  RingVector(RingParams params, std::vector<uint64_t> coords);

  static RingVector Zero(const RingParams& params);

  const RingParams& params() const { return params_; }
  const std::vector<uint64_t>& coords() const { return coords_; }
  uint64_t operator[](size_t i) const { return coords_[i]; }
  size_t size() const { return coords_.size(); }

  bool IsZero() const;

  friend bool operator==(const RingVector&, const RingVector&) = default;

  std::string DebugString() const;

 private:
  RingParams params_;
  std::vector<uint64_t> coords_;
};

// Coordinate-wise (a + b) mod q. Throws DimensionError on mismatched params.
RingVector Add(const RingVector& a, const RingVector& b);

// Coordinate-wise (q - a) mod q.
RingVector Neg(const RingVector& a);

// a + (-b).
RingVector Sub(const RingVector& a, const RingVector& b);

// Left fold of Add. Throws ArityError on an empty sequence and DimensionError
// on mixed params.
RingVector SumAll(std::span<const RingVector> vs);

// Each coordinate i.i.d. uniform on [0, q).
RingVector SampleUniform(const RingParams& params, RandomSource& rng);

inline RingVector operator+(const RingVector& a, const RingVector& b) {
  return Add(a, b);
}
inline RingVector operator-(const RingVector& a) { return Neg(a); }
inline RingVector operator-(const RingVector& a, const RingVector& b) {
  return Sub(a, b);
}

}  // namespace dsa

#endif  // DSA_ALGEBRA_H_
