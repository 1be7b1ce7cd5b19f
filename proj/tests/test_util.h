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

#ifndef DSA_TESTS_TEST_UTIL_H_
#define DSA_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "dsa/algebra.h"

namespace dsa::testing {

inline RingVector Vec(uint64_t q, std::vector<uint64_t> coords) {
  const size_t n = coords.size();
  return RingVector(RingParams(q, n), std::move(coords));
}

// Random (q, L) pairs for property tests.
inline RingParams RandomParams(RandomSource& rng) {
  static const uint64_t kModuli[] = {2, 3, 5, 7, 16, 255, 65536, 4294967291ULL,
                                     uint64_t{1} << 32};
  const uint64_t q = kModuli[rng.UniformBelow(std::size(kModuli))];
  return RingParams(q, 1 + rng.UniformBelow(8));
}

// Scalar (L = 1) world of the masking construction, computed with plain
// integer arithmetic and no library types. Used to derive expected values
// independently of the oracle.
struct BruteWorld {
  std::vector<uint64_t> w;  // inputs W_1..W_K
  std::vector<uint64_t> n;  // source symbols N_1..N_{K-1}
  std::vector<uint64_t> z;  // keys Z_k
  std::vector<uint64_t> x;  // messages X_k
  uint64_t sum;
};

// Enumerates all q^(2K-1) worlds. `zero_keys` replaces every key with 0.
inline void ForEachBruteWorld(int k_users, uint64_t q,
                              const std::function<void(const BruteWorld&)>& fn,
                              bool zero_keys = false) {
  const int digits = 2 * k_users - 1;
  uint64_t total = 1;
  for (int i = 0; i < digits; ++i) total *= q;
  for (uint64_t idx = 0; idx < total; ++idx) {
    BruteWorld bw;
    uint64_t rest = idx;
    for (int i = 0; i < k_users; ++i, rest /= q) bw.w.push_back(rest % q);
    for (int i = 0; i + 1 < k_users; ++i, rest /= q) bw.n.push_back(rest % q);
    uint64_t acc = 0;
    for (uint64_t v : bw.n) {
      bw.z.push_back(zero_keys ? 0 : v);
      acc = (acc + v) % q;
    }
    bw.z.push_back(zero_keys ? 0 : (q - acc) % q);
    bw.sum = 0;
    for (int i = 0; i < k_users; ++i) {
      bw.x.push_back((bw.w[i] + bw.z[i]) % q);
      bw.sum = (bw.sum + bw.w[i]) % q;
    }
    fn(bw);
  }
}

using Extractor = std::function<std::vector<uint64_t>(const BruteWorld&)>;

// H(f) over the uniform world prior, by direct counting.
inline double BruteEntropy(int k_users, uint64_t q, const Extractor& f,
                           bool zero_keys = false) {
  std::map<std::vector<uint64_t>, double> counts;
  double total = 0;
  ForEachBruteWorld(
      k_users, q,
      [&](const BruteWorld& bw) {
        counts[f(bw)] += 1;
        total += 1;
      },
      zero_keys);
  double h = 0;
  for (const auto& [v, c] : counts) h -= c / total * std::log2(c / total);
  return h;
}

inline Extractor Concat(std::vector<Extractor> parts) {
  return [parts](const BruteWorld& bw) {
    std::vector<uint64_t> out;
    for (const auto& p : parts) {
      auto v = p(bw);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  };
}

// I(a; b | g) = H(a,g) + H(b,g) - H(a,b,g) - H(g).
inline double BruteMi(int k_users, uint64_t q, const Extractor& a,
                      const Extractor& b, const Extractor& g,
                      bool zero_keys = false) {
  return BruteEntropy(k_users, q, Concat({a, g}), zero_keys) +
         BruteEntropy(k_users, q, Concat({b, g}), zero_keys) -
         BruteEntropy(k_users, q, Concat({a, b, g}), zero_keys) -
         BruteEntropy(k_users, q, g, zero_keys);
}

}  // namespace dsa::testing

#endif  // DSA_TESTS_TEST_UTIL_H_
