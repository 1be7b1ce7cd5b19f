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

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <utility>

#include "dsa/errors.h"
#include "dsa/protocol.h"

namespace dsa {

size_t CodeHash::operator()(const std::vector<uint64_t>& v) const {
  uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (uint64_t x : v) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<size_t>(h ^ (h >> 32));
}

namespace {

// Sorts (code, count) pairs by code and sums equal codes.
std::vector<std::pair<uint64_t, uint64_t>> SortAndMerge(
    std::vector<std::pair<uint64_t, uint64_t>> v) {
  std::sort(v.begin(), v.end());
  size_t out = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (out > 0 && v[out - 1].first == v[i].first) {
      v[out - 1].second += v[i].second;
    } else {
      v[out++] = v[i];
    }
  }
  v.resize(out);
  return v;
}

// Ordered copy; inserting sorted keys at the end is linear.
std::map<std::vector<uint64_t>, uint64_t> Ordered(HashedCounts counts) {
  std::vector<std::pair<std::vector<uint64_t>, uint64_t>> flat(
      std::make_move_iterator(counts.begin()), std::make_move_iterator(counts.end()));
  counts = HashedCounts();
  std::sort(flat.begin(), flat.end());
  std::map<std::vector<uint64_t>, uint64_t> out;
  for (auto& kv : flat) out.emplace_hint(out.end(), std::move(kv));
  return out;
}

}  // namespace

namespace {

// a^b, or nullopt once the value passes `cap`.
std::optional<uint64_t> CappedPow(uint64_t a, uint64_t b, uint64_t cap) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < b; ++i) {
    if (r > cap / a) return std::nullopt;
    r *= a;
  }
  return r;
}

std::string SetName(const char* prefix, std::span<const int> users) {
  std::string s = std::string(prefix) + "{";
  for (size_t i = 0; i < users.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(users[i]);
  }
  return s + "}";
}

VariableSpec SetVariable(const char* prefix, AtomKind kind,
                         std::span<const int> users) {
  VariableSpec v{SetName(prefix, users), {}};
  for (int u : users) v.atoms.push_back({kind, u});
  return v;
}

}  // namespace

Scheme OptimalScheme() {
  return Scheme{
      "optimal",
      [](const ProtocolParams& p) { return p.users() - 1; },
      [](const ProtocolParams& p, std::span<const RingVector> noise) {
        SourceKey src(p, std::vector<RingVector>(noise.begin(), noise.end()));
        std::vector<RingVector> masks;
        for (auto& k : DeriveKeys(src)) masks.push_back(std::move(k.mask));
        return masks;
      },
      MaskInput};
}

Scheme ZeroKeyScheme() {
  return Scheme{
      "zero-key",
      [](const ProtocolParams&) { return 0; },
      [](const ProtocolParams& p, std::span<const RingVector>) {
        return std::vector<RingVector>(p.users(), RingVector::Zero(p.ring()));
      },
      MaskInput};
}

Scheme ShortSourceScheme() {
  return Scheme{
      "short-source",
      [](const ProtocolParams& p) { return p.users() - 2; },
      [](const ProtocolParams&, std::span<const RingVector> noise) {
        std::vector<RingVector> masks(noise.begin(), noise.end());
        masks.push_back(noise.back());
        std::vector<RingVector> head(masks);
        masks.push_back(Neg(SumAll(head)));
        return masks;
      },
      MaskInput};
}

namespace var {

VariableSpec W(int k) { return {"W" + std::to_string(k), {{AtomKind::kInput, k}}}; }
VariableSpec Z(int k) { return {"Z" + std::to_string(k), {{AtomKind::kKey, k}}}; }
VariableSpec X(int k) {
  return {"X" + std::to_string(k), {{AtomKind::kMessage, k}}};
}
VariableSpec N(int i) { return {"N" + std::to_string(i), {{AtomKind::kNoise, i}}}; }
VariableSpec SumW() { return {"SumW", {{AtomKind::kSum, 0}}}; }

VariableSpec Tuple(std::string name, std::span<const VariableSpec> parts) {
  VariableSpec v{std::move(name), {}};
  for (const auto& p : parts) v.atoms.insert(v.atoms.end(), p.atoms.begin(), p.atoms.end());
  return v;
}

VariableSpec Tuple(std::string name, std::initializer_list<VariableSpec> parts) {
  return Tuple(std::move(name), std::span<const VariableSpec>(parts.begin(), parts.size()));
}

VariableSpec Inputs(std::span<const int> users) {
  return SetVariable("W", AtomKind::kInput, users);
}
VariableSpec Keys(std::span<const int> users) {
  return SetVariable("Z", AtomKind::kKey, users);
}
VariableSpec Messages(std::span<const int> users) {
  return SetVariable("X", AtomKind::kMessage, users);
}

VariableSpec Collection(std::span<const int> users) {
  VariableSpec v{SetName("C", users), {}};
  for (int u : users) {
    v.atoms.push_back({AtomKind::kInput, u});
    v.atoms.push_back({AtomKind::kKey, u});
  }
  return v;
}

}  // namespace var

std::string WorldCountFormula(const ProtocolParams& params, const Scheme& scheme) {
  const uint64_t q = params.ring().modulus();
  const uint64_t exponent =
      static_cast<uint64_t>(params.users() + scheme.source_size(params)) *
      params.ring().length();
  std::string s;
  if ((q & (q - 1)) == 0) {
    s = "2^" + std::to_string(exponent * static_cast<uint64_t>(std::log2(q)));
  } else {
    s = std::to_string(q) + "^" + std::to_string(exponent);
  }
  auto exact = CappedPow(q, exponent, std::numeric_limits<uint64_t>::max());
  return s + (exact ? " = " + std::to_string(*exact) : " > 2^64");
}

WorldSpace::WorldSpace(ProtocolParams params, Scheme scheme, uint64_t budget,
                       int workers)
    : params_(params),
      scheme_(std::move(scheme)),
      source_size_(scheme_.source_size(params_)) {
  const uint64_t q = params_.ring().modulus();
  const uint64_t digits = static_cast<uint64_t>(params_.users() + source_size_);
  auto count = CappedPow(q, digits * params_.ring().length(), budget);
  if (!count) {
    throw BudgetError("exhaustive enumeration of " + params_.DebugString() +
                      " under scheme '" + scheme_.name + "' needs " +
                      WorldCountFormula(params_, scheme_) +
                      " worlds (q^((K + source vectors) * L)), budget is " +
                      std::to_string(budget));
  }
  world_count_ = *count;
  auto radix = CappedPow(q, params_.ring().length(), 1 << 16);
  if (!radix) {
    throw BudgetError("per-user alphabet q^L exceeds 2^16 symbols");
  }
  radix_ = *radix;
  stride_ = static_cast<size_t>(3 * params_.users() + source_size_ + 1);
  table_.resize(world_count_ * stride_);

  const uint64_t n = std::max(1, std::min<int>(workers, 64));
  std::vector<std::thread> pool;
  const uint64_t chunk = (world_count_ + n - 1) / n;
  for (uint64_t i = 1; i < n; ++i) {
    const uint64_t b = std::min(world_count_, i * chunk);
    const uint64_t e = std::min(world_count_, (i + 1) * chunk);
    if (b < e) pool.emplace_back([this, b, e] { Fill(b, e); });
  }
  std::exception_ptr first_error;
  try {
    Fill(0, std::min(world_count_, chunk));
  } catch (...) {
    first_error = std::current_exception();
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

RingVector WorldSpace::AtomVector(uint32_t value) const {
  const uint64_t q = params_.ring().modulus();
  std::vector<uint64_t> coords(params_.ring().length());
  for (auto& c : coords) {
    c = value % q;
    value = static_cast<uint32_t>(value / q);
  }
  return RingVector(params_.ring(), std::move(coords));
}

namespace {

uint16_t EncodeAtom(const RingVector& v) {
  uint64_t code = 0;
  for (size_t i = v.size(); i-- > 0;) code = code * v.params().modulus() + v[i];
  return static_cast<uint16_t>(code);
}

}  // namespace

void WorldSpace::Fill(uint64_t begin, uint64_t end) {
  const int k_users = params_.users();
  std::vector<RingVector> inputs, noise;
  for (uint64_t w = begin; w < end; ++w) {
    uint64_t rest = w;
    uint16_t* row = &table_[w * stride_];
    inputs.clear();
    noise.clear();
    for (int i = 0; i < k_users + source_size_; ++i) {
      const auto digit = static_cast<uint32_t>(rest % radix_);
      rest /= radix_;
      row[i] = static_cast<uint16_t>(digit);
      (i < k_users ? inputs : noise).push_back(AtomVector(digit));
    }
    const auto keys = scheme_.derive_keys(params_, noise);
    if (keys.size() != static_cast<size_t>(k_users)) {
      throw InvalidArgumentError("scheme '" + scheme_.name + "' derived " +
                                 std::to_string(keys.size()) + " keys for K=" +
                                 std::to_string(k_users));
    }
    uint16_t* key_row = row + k_users + source_size_;
    uint16_t* msg_row = key_row + k_users;
    for (int k = 0; k < k_users; ++k) {
      key_row[k] = EncodeAtom(keys[k]);
      msg_row[k] = EncodeAtom(scheme_.make_message(inputs[k], keys[k]));
    }
    msg_row[k_users] = EncodeAtom(SumAll(inputs));
  }
}

size_t WorldSpace::Slot(const Atom& atom) const {
  const int k_users = params_.users();
  auto in_range = [&](int hi) {
    if (atom.index < 1 || atom.index > hi) {
      throw SpecError("atom index " + std::to_string(atom.index) +
                      " outside [1, " + std::to_string(hi) + "]");
    }
    return static_cast<size_t>(atom.index - 1);
  };
  switch (atom.kind) {
    case AtomKind::kInput:
      return in_range(k_users);
    case AtomKind::kNoise:
      return k_users + in_range(source_size_);
    case AtomKind::kKey:
      return k_users + source_size_ + in_range(k_users);
    case AtomKind::kMessage:
      return 2 * k_users + source_size_ + in_range(k_users);
    case AtomKind::kSum:
      return 3 * k_users + source_size_;
  }
  throw SpecError("unknown atom kind");
}

uint32_t WorldSpace::AtomValue(uint64_t world, const Atom& atom) const {
  return table_[world * stride_ + Slot(atom)];
}

JointDistribution::JointDistribution(
    std::vector<VariableSpec> variables, uint64_t atom_radix,
    std::map<std::vector<uint64_t>, uint64_t> cells)
    : variables_(std::move(variables)), radix_(atom_radix), cells_(std::move(cells)) {
  for (const auto& [key, count] : cells_) total_ += count;
  for (const auto& v : variables_) {
    cards_.push_back(CappedPow(radix_, v.atoms.size(),
                               std::numeric_limits<uint64_t>::max()));
  }
}

size_t JointDistribution::IndexOf(const std::string& name) const {
  for (size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  throw SpecError("unknown variable '" + name + "'");
}

HashedCounts JointDistribution::HashedMarginal(std::span<const size_t> indices) const {
  HashedCounts out;
  out.reserve(cells_.size());
  std::vector<uint64_t> key(indices.size());
  for (const auto& [values, count] : cells_) {
    for (size_t i = 0; i < indices.size(); ++i) key[i] = values[indices[i]];
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, count);
    } else {
      it->second += count;
    }
  }
  return out;
}

std::optional<uint64_t> JointDistribution::Cardinality(
    std::span<const size_t> indices) const {
  uint64_t product = 1;
  for (size_t i : indices) {
    if (!cards_[i] || product > std::numeric_limits<uint64_t>::max() / *cards_[i]) {
      return std::nullopt;
    }
    product *= *cards_[i];
  }
  return product;
}

uint64_t JointDistribution::PackCell(const std::vector<uint64_t>& cell,
                                     std::span<const size_t> indices) const {
  uint64_t code = 0;
  for (size_t i : indices) code = code * *cards_[i] + cell[i];
  return code;
}

std::optional<std::vector<std::pair<uint64_t, uint64_t>>>
JointDistribution::PackedMarginal(std::span<const size_t> indices) const {
  if (!Cardinality(indices)) return std::nullopt;
  std::vector<std::pair<uint64_t, uint64_t>> out;
  out.reserve(cells_.size());
  for (const auto& [values, count] : cells_) out.emplace_back(PackCell(values, indices), count);
  return SortAndMerge(std::move(out));
}

std::map<std::vector<uint64_t>, uint64_t> JointDistribution::Marginal(
    std::span<const size_t> indices) const {
  return Ordered(HashedMarginal(indices));
}

long double JointDistribution::JointEntropy(std::span<const size_t> indices) const {
  if (indices.empty() || total_ == 0) return 0.0L;
  // Summed in sorted order so the result does not depend on hash layout.
  std::vector<uint64_t> counts;
  if (auto packed = PackedMarginal(indices)) {
    for (const auto& [code, count] : *packed) counts.push_back(count);
  } else {
    for (const auto& [key, count] : HashedMarginal(indices)) counts.push_back(count);
  }
  std::sort(counts.begin(), counts.end());
  long double acc = 0.0L;
  for (uint64_t count : counts) {
    const long double c = static_cast<long double>(count);
    acc += c * std::log2(c);
  }
  const long double n = static_cast<long double>(total_);
  return std::log2(n) - acc / n;
}

std::string JointDistribution::Dump() const {
  std::ostringstream out;
  out << "# dsa-distribution v1 total=" << total_ << "\n";
  for (const auto& [values, count] : cells_) {
    for (size_t i = 0; i < variables_.size(); ++i) {
      const size_t n = variables_[i].atoms.size();
      std::vector<uint64_t> atoms(n);
      uint64_t code = values[i];
      for (size_t j = n; j-- > 0;) {
        atoms[j] = code % radix_;
        code /= radix_;
      }
      out << variables_[i].name << "=";
      if (n != 1) out << "(";
      for (size_t j = 0; j < n; ++j) {
        if (j) out << ",";
        out << atoms[j];
      }
      if (n != 1) out << ")";
      out << " ";
    }
    out << "count=" << count << "\n";
  }
  return out.str();
}

JointDistribution Tabulate(const WorldSpace& space,
                           std::span<const VariableSpec> vars, int workers) {
  const uint64_t radix = space.atom_radix();
  for (const auto& v : vars) {
    if (!v.atoms.empty() &&
        !CappedPow(radix, v.atoms.size(), std::numeric_limits<uint64_t>::max())) {
      throw SpecError("variable '" + v.name + "' needs more than 64 bits");
    }
  }
  std::vector<std::vector<size_t>> slots;
  for (const auto& v : vars) {
    auto& row = slots.emplace_back();
    for (const auto& a : v.atoms) row.push_back(space.Slot(a));
  }

  // Fast path: the whole cell key packs into one 64-bit code.
  std::vector<uint64_t> cards;
  std::optional<uint64_t> joint_card = 1;
  for (const auto& v : vars) {
    const auto c = CappedPow(radix, v.atoms.size(), std::numeric_limits<uint64_t>::max());
    cards.push_back(c.value_or(0));
    if (!c || !joint_card || *joint_card > std::numeric_limits<uint64_t>::max() / *c) {
      joint_card = std::nullopt;
    } else {
      *joint_card *= *c;
    }
  }
  const uint64_t total_worlds = space.world_count();
  const uint64_t parts = std::max(1, std::min<int>(workers, 64));
  const uint64_t part_size = (total_worlds + parts - 1) / parts;
  auto run_parts = [&](auto&& body) {
    std::vector<std::thread> pool;
    for (uint64_t i = 1; i < parts; ++i) {
      const uint64_t b = std::min(total_worlds, i * part_size);
      const uint64_t e = std::min(total_worlds, (i + 1) * part_size);
      pool.emplace_back([&body, i, b, e] { body(i, b, e); });
    }
    body(0, 0, std::min(total_worlds, part_size));
    for (auto& th : pool) th.join();
  };
  if (joint_card) {
    constexpr uint64_t kDenseLimit = uint64_t{1} << 20;
    auto code_of = [&](uint64_t w) {
      uint64_t code = 0;
      for (size_t i = 0; i < vars.size(); ++i) {
        uint64_t c = 0;
        for (size_t slot : slots[i]) c = c * radix + space.SlotValue(w, slot);
        code = code * cards[i] + c;
      }
      return code;
    };
    using Runs = std::vector<std::pair<uint64_t, uint64_t>>;
    std::vector<Runs> partial(parts);
    run_parts([&](uint64_t i, uint64_t b, uint64_t e) {
      if (*joint_card <= kDenseLimit) {
        std::vector<uint64_t> dense(*joint_card, 0);
        for (uint64_t w = b; w < e; ++w) ++dense[code_of(w)];
        for (uint64_t c = 0; c < dense.size(); ++c) {
          if (dense[c]) partial[i].emplace_back(c, dense[c]);
        }
      } else {
        partial[i].reserve(e - b);
        for (uint64_t w = b; w < e; ++w) partial[i].emplace_back(code_of(w), 1);
        partial[i] = SortAndMerge(std::move(partial[i]));
      }
    });
    Runs merged = std::move(partial[0]);
    for (uint64_t i = 1; i < parts; ++i) {
      merged.insert(merged.end(), partial[i].begin(), partial[i].end());
      partial[i] = Runs();
    }
    if (parts > 1) merged = SortAndMerge(std::move(merged));
    // Codes are mixed radix with the first variable most significant, so code
    // order is the lexicographic order of the unpacked keys.
    std::map<std::vector<uint64_t>, uint64_t> cells;
    std::vector<uint64_t> key(vars.size());
    for (const auto& [code, count] : merged) {
      uint64_t rest = code;
      for (size_t i = vars.size(); i-- > 0;) {
        key[i] = rest % cards[i];
        rest /= cards[i];
      }
      cells.emplace_hint(cells.end(), key, count);
    }
    return JointDistribution(std::vector<VariableSpec>(vars.begin(), vars.end()),
                             radix, std::move(cells));
  }

  // Counting is hashed; the result is ordered once at the end.
  using Cells = HashedCounts;
  auto count_range = [&](uint64_t begin, uint64_t end, Cells& cells) {
    std::vector<uint64_t> key(vars.size());
    for (uint64_t w = begin; w < end; ++w) {
      for (size_t i = 0; i < vars.size(); ++i) {
        uint64_t code = 0;
        for (size_t slot : slots[i]) code = code * radix + space.SlotValue(w, slot);
        key[i] = code;
      }
      auto it = cells.find(key);
      if (it == cells.end()) {
        cells.emplace(key, 1);
      } else {
        ++it->second;
      }
    }
  };

  const uint64_t total = space.world_count();
  const uint64_t n = std::max(1, std::min<int>(workers, 64));
  const uint64_t chunk = (total + n - 1) / n;
  std::vector<Cells> partial(n);
  std::vector<std::thread> pool;
  for (uint64_t i = 1; i < n; ++i) {
    const uint64_t b = std::min(total, i * chunk);
    const uint64_t e = std::min(total, (i + 1) * chunk);
    pool.emplace_back([&, i, b, e] { count_range(b, e, partial[i]); });
  }
  count_range(0, std::min(total, chunk), partial[0]);
  for (auto& th : pool) th.join();

  Cells merged = std::move(partial[0]);
  for (uint64_t i = 1; i < n; ++i) {
    for (auto& [key, count] : partial[i]) merged[key] += count;
    partial[i] = Cells();
  }
  return JointDistribution(std::vector<VariableSpec>(vars.begin(), vars.end()),
                           radix, Ordered(std::move(merged)));
}

namespace {

std::vector<size_t> Indices(const JointDistribution& d,
                            std::initializer_list<const VarNames*> groups) {
  std::set<size_t> s;
  for (const auto* g : groups) {
    for (const auto& name : *g) s.insert(d.IndexOf(name));
  }
  return {s.begin(), s.end()};
}

// Positions of `sub` inside the sorted index list `all`.
std::vector<size_t> Positions(const std::vector<size_t>& all,
                              const std::vector<size_t>& sub) {
  std::vector<size_t> pos;
  for (size_t s : sub) {
    pos.push_back(static_cast<size_t>(
        std::lower_bound(all.begin(), all.end(), s) - all.begin()));
  }
  return pos;
}

}  // namespace

double EntropyBits(const JointDistribution& d, const VarNames& targets,
                   const VarNames& given) {
  const auto joint = Indices(d, {&targets, &given});
  const auto cond = Indices(d, {&given});
  return static_cast<double>(d.JointEntropy(joint) - d.JointEntropy(cond));
}

double ConditionalMiBits(const JointDistribution& d, const VarNames& a,
                         const VarNames& b, const VarNames& given) {
  const auto ag = Indices(d, {&a, &given});
  const auto bg = Indices(d, {&b, &given});
  const auto abg = Indices(d, {&a, &b, &given});
  const auto g = Indices(d, {&given});
  return static_cast<double>(d.JointEntropy(ag) + d.JointEntropy(bg) -
                             d.JointEntropy(abg) - d.JointEntropy(g));
}

bool ConditionalMiIsZero(const JointDistribution& d, const VarNames& a,
                         const VarNames& b, const VarNames& given) {
  const auto ag = Indices(d, {&a, &given});
  const auto bg = Indices(d, {&b, &given});
  const auto abg = Indices(d, {&a, &b, &given});
  const auto g = Indices(d, {&given});
  if (d.Cardinality(abg)) {
    // Each (a,b,g) code carries its projections; the sub-codes fit because
    // every alphabet size is at least 1.
    struct Row {
      uint64_t abg, ag, bg, g, count;
    };
    std::vector<Row> rows;
    rows.reserve(d.cells().size());
    for (const auto& [values, count] : d.cells()) {
      rows.push_back({d.PackCell(values, abg), d.PackCell(values, ag),
                      d.PackCell(values, bg), d.PackCell(values, g), count});
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& x, const Row& y) { return x.abg < y.abg; });
    const auto m_ag = *d.PackedMarginal(ag);
    const auto m_bg = *d.PackedMarginal(bg);
    const auto m_g = *d.PackedMarginal(g);
    auto lookup = [](const std::vector<std::pair<uint64_t, uint64_t>>& m, uint64_t code) {
      return std::lower_bound(m.begin(), m.end(), std::make_pair(code, uint64_t{0}))
          ->second;
    };
    for (size_t i = 0; i < rows.size();) {
      uint64_t count = 0;
      size_t j = i;
      for (; j < rows.size() && rows[j].abg == rows[i].abg; ++j) count += rows[j].count;
      const Row& r = rows[i];
      const unsigned __int128 lhs =
          static_cast<unsigned __int128>(count) * lookup(m_g, r.g);
      const unsigned __int128 rhs =
          static_cast<unsigned __int128>(lookup(m_ag, r.ag)) * lookup(m_bg, r.bg);
      if (lhs != rhs) return false;
      i = j;
    }
    return true;
  }
  const auto m_ag = d.HashedMarginal(ag);
  const auto m_bg = d.HashedMarginal(bg);
  const auto m_g = d.HashedMarginal(g);
  const auto pos_ag = Positions(abg, ag);
  const auto pos_bg = Positions(abg, bg);
  const auto pos_g = Positions(abg, g);

  auto project = [](const std::vector<uint64_t>& key,
                    const std::vector<size_t>& pos) {
    std::vector<uint64_t> out(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) out[i] = key[pos[i]];
    return out;
  };
  // Checking only occupied (a,b,g) cells suffices: if the identity holds on
  // all of them, summing both sides over a and b gives count(g)^2 on each, so
  // no positive product count(a,g) * count(b,g) can sit on an empty cell.
  for (const auto& [key, count] : d.HashedMarginal(abg)) {
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(count) * m_g.at(project(key, pos_g));
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(m_ag.at(project(key, pos_ag))) *
        m_bg.at(project(key, pos_bg));
    if (lhs != rhs) return false;
  }
  return true;
}

bool IsDetermined(const JointDistribution& d, const VarNames& targets,
                  const VarNames& given) {
  const auto joint = Indices(d, {&targets, &given});
  const auto cond = Indices(d, {&given});
  auto support = [&](const std::vector<size_t>& idx) {
    if (auto packed = d.PackedMarginal(idx)) return packed->size();
    return d.HashedMarginal(idx).size();
  };
  return support(joint) == support(cond);
}

}  // namespace dsa
