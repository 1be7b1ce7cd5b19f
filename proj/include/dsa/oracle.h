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

#ifndef DSA_ORACLE_H_
#define DSA_ORACLE_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsa/algebra.h"
#include "dsa/keying.h"

namespace dsa {

// Default cap on the number of enumerated worlds.
inline constexpr uint64_t kDefaultWorldBudget = uint64_t{1} << 24;

// A secure-aggregation scheme as the oracle sees it: a key-derivation map from
// `source_size` uniform source vectors to K individual keys, and a message map
// from (input, key) to the broadcast. Negative controls and third-party
// schemes plug in here.
struct Scheme {
  std::string name;
  std::function<int(const ProtocolParams&)> source_size;
  std::function<std::vector<RingVector>(const ProtocolParams&,
                                        std::span<const RingVector>)>
      derive_keys;
  std::function<RingVector(const RingVector&, const RingVector&)> make_message;
};

// The construction implemented by keying and protocol: K-1 source vectors,
// DeriveKeys, and MaskInput.
Scheme OptimalScheme();
// Negative control: every key is zero, so messages are the raw inputs.
Scheme ZeroKeyScheme();
// Negative control: K-2 source vectors. Users K-2 and K-1 share a key and
// Z_K restores the zero sum.
Scheme ShortSourceScheme();

// Protocol random variables. Indices are 1-based; the sum atom has index 0.
enum class AtomKind { kInput, kNoise, kKey, kMessage, kSum };

struct Atom {
  AtomKind kind;
  int index;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// A named tuple of atoms. An empty tuple is a constant.
struct VariableSpec {
  std::string name;
  std::vector<Atom> atoms;
};

namespace var {

VariableSpec W(int k);
VariableSpec Z(int k);
VariableSpec X(int k);
VariableSpec N(int i);
VariableSpec SumW();
// Named concatenation of the parts' atoms.
VariableSpec Tuple(std::string name, std::initializer_list<VariableSpec> parts);
VariableSpec Tuple(std::string name, std::span<const VariableSpec> parts);
// {W_i}_{i in s}, {Z_i}_{i in s}, {X_i}_{i in s}; named e.g. "W{2,3}".
VariableSpec Inputs(std::span<const int> users);
VariableSpec Keys(std::span<const int> users);
VariableSpec Messages(std::span<const int> users);
// C_S = {W_i, Z_i}_{i in s}.
VariableSpec Collection(std::span<const int> users);

}  // namespace var

// Human-readable world count, e.g. "2^60 = 1152921504606846976".
std::string WorldCountFormula(const ProtocolParams& params,
                              const Scheme& scheme);

// Every assignment of K inputs and the scheme's source vectors, each world
// with equal weight. All derived atoms are computed once at construction.
class WorldSpace {
 public:
  // Throws BudgetError (quoting the world count) when the space exceeds
  // `budget` worlds.
  WorldSpace(ProtocolParams params, Scheme scheme = OptimalScheme(),
             uint64_t budget = kDefaultWorldBudget, int workers = 1);

  const ProtocolParams& params() const { return params_; }
  const Scheme& scheme() const { return scheme_; }
  uint64_t world_count() const { return world_count_; }
  int source_size() const { return source_size_; }
  // q^L, the alphabet size of one atom.
  uint64_t atom_radix() const { return radix_; }

  // Index of (input, source vectors) digits to a world is little-endian mixed
  // radix: W_1 is the least significant digit.
  uint32_t AtomValue(uint64_t world, const Atom& atom) const;

  // Decodes an atom value back to its ring vector.
  RingVector AtomVector(uint32_t value) const;

  // Column of an atom in the world table (validated once), and the raw read.
  size_t Slot(const Atom& atom) const;
  uint32_t SlotValue(uint64_t world, size_t slot) const {
    return table_[world * stride_ + slot];
  }

 private:
  void Fill(uint64_t begin, uint64_t end);

  ProtocolParams params_;
  Scheme scheme_;
  int source_size_;
  uint64_t radix_;
  uint64_t world_count_;
  size_t stride_;
  std::vector<uint16_t> table_;
};

struct CodeHash {
  size_t operator()(const std::vector<uint64_t>& v) const;
};
using HashedCounts =
    std::unordered_map<std::vector<uint64_t>, uint64_t, CodeHash>;

// Exact joint counts over worlds. Cells are keyed by one code per variable
// (mixed radix over the variable's atoms) and kept in lexicographic order.
class JointDistribution {
 public:
  JointDistribution(std::vector<VariableSpec> variables, uint64_t atom_radix,
                    std::map<std::vector<uint64_t>, uint64_t> cells);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const std::map<std::vector<uint64_t>, uint64_t>& cells() const {
    return cells_;
  }
  uint64_t total() const { return total_; }

  // Throws SpecError for a name that is not a variable of this distribution.
  size_t IndexOf(const std::string& name) const;

  // Counts projected onto the given variable indices (in that order).
  std::map<std::vector<uint64_t>, uint64_t> Marginal(
      std::span<const size_t> indices) const;

  // Same counts, unordered.
  HashedCounts HashedMarginal(std::span<const size_t> indices) const;

  // Product of the listed variables' alphabet sizes, or nullopt past 2^64.
  std::optional<uint64_t> Cardinality(std::span<const size_t> indices) const;
  // Mixed-radix code of a cell's values at `indices`, first index most
  // significant. Only meaningful when Cardinality(indices) is set.
  uint64_t PackCell(const std::vector<uint64_t>& cell,
                    std::span<const size_t> indices) const;
  // Marginal as (packed code, count) sorted by code; nullopt when the code
  // does not fit in 64 bits.
  std::optional<std::vector<std::pair<uint64_t, uint64_t>>> PackedMarginal(
      std::span<const size_t> indices) const;

  // H of the listed variables, in bits.
  long double JointEntropy(std::span<const size_t> indices) const;

  // Deterministic table: one "<var>=<value> ... count=<n>" row per cell.
  std::string Dump() const;

 private:
  std::vector<VariableSpec> variables_;
  uint64_t radix_;
  std::map<std::vector<uint64_t>, uint64_t> cells_;
  // Alphabet size per variable; nullopt past 2^64.
  std::vector<std::optional<uint64_t>> cards_;
  uint64_t total_ = 0;
};

// Full enumeration. Partitioning across `workers` does not change the result.
// Throws SpecError if a variable's code does not fit in 64 bits or names an
// atom outside the space.
JointDistribution Tabulate(const WorldSpace& space,
                           std::span<const VariableSpec> vars, int workers = 1);

using VarNames = std::vector<std::string>;

// H(targets | given) in bits.
double EntropyBits(const JointDistribution& d, const VarNames& targets,
                   const VarNames& given = {});

// I(a; b | given) in bits.
double ConditionalMiBits(const JointDistribution& d, const VarNames& a,
                         const VarNames& b, const VarNames& given = {});

// Exact integer test of I(a; b | given) = 0: for every given-value g with
// positive count, count(a,b,g) * count(g) == count(a,g) * count(b,g).
bool ConditionalMiIsZero(const JointDistribution& d, const VarNames& a,
                         const VarNames& b, const VarNames& given = {});

// Exact test of H(targets | given) = 0: each given-value fixes the targets.
bool IsDetermined(const JointDistribution& d, const VarNames& targets,
                  const VarNames& given);

}  // namespace dsa

#endif  // DSA_ORACLE_H_
