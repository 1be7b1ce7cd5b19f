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

#include "dsa/netsim.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <sstream>
#include <thread>
#include <utility>

#include "dsa/errors.h"

namespace dsa {
namespace {

enum Stream : uint64_t { kInputStream = 1, kDealerStream = 2, kShuffleStream = 3 };

// SplitMix64 finalizer over (seed, stream).
uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<uint64_t> KeyFingerprint(const SimConfig& cfg) {
  if (!cfg.source_key) return {0, cfg.seed};
  const auto& ring = cfg.params.ring();
  std::vector<uint64_t> fp = {1, ring.modulus(), ring.length(),
                              static_cast<uint64_t>(cfg.params.users())};
  for (const auto& n : cfg.source_key->noise()) {
    fp.insert(fp.end(), n.coords().begin(), n.coords().end());
  }
  return fp;
}

void ValidateConfig(const SimConfig& cfg) {
  const auto& p = cfg.params;
  if (cfg.inputs) {
    if (cfg.inputs->size() != static_cast<size_t>(p.users())) {
      throw InvalidArgumentError("expected " + std::to_string(p.users()) +
                                 " explicit inputs, got " +
                                 std::to_string(cfg.inputs->size()));
    }
    for (const auto& w : *cfg.inputs) {
      if (w.params() != p.ring()) {
        throw DimensionError("explicit input over " + w.params().DebugString() +
                             ", expected " + p.ring().DebugString());
      }
    }
  }
  if (cfg.source_key && cfg.source_key->params() != p) {
    throw InvalidArgumentError("explicit source key built for " +
                               cfg.source_key->params().DebugString());
  }
}

template <typename F>
auto AsUser(int user, F&& f) {
  try {
    return f();
  } catch (const SimulationError&) {
    throw;
  } catch (const DsaError& e) {
    throw SimulationError(user, e.what());
  }
}

std::vector<std::pair<int, int>> DeliverySchedule(const SimConfig& cfg) {
  const int k = cfg.params.users();
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<size_t>(k) * (k - 1));
  for (int offset = 1; offset < k; ++offset) {
    for (int s = 1; s <= k; ++s) order.emplace_back(s, (s - 1 + offset) % k + 1);
  }
  if (cfg.delivery == DeliveryOrder::kSeededShuffle) {
    DeterministicRandomSource rng(DeriveSeed(cfg.seed, kShuffleStream));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.UniformBelow(i)]);
    }
  }
  return order;
}

int HexWidth(uint64_t modulus) {
  int bits = 0;
  for (uint64_t v = modulus - 1; v; v >>= 1) ++bits;
  return std::max(1, (bits + 3) / 4);
}

std::string EncodeHex(const std::vector<uint64_t>& symbols, int width) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(symbols.size() * width);
  for (uint64_t s : symbols) {
    for (int d = width - 1; d >= 0; --d) out.push_back(kDigits[(s >> (4 * d)) & 0xF]);
  }
  return out;
}

}  // namespace

std::string_view DeliveryOrderName(DeliveryOrder order) {
  return order == DeliveryOrder::kRoundRobin ? "round-robin" : "seeded-shuffle";
}

DeliveryOrder ParseDeliveryOrder(std::string_view name) {
  if (name == "round-robin") return DeliveryOrder::kRoundRobin;
  if (name == "seeded-shuffle") return DeliveryOrder::kSeededShuffle;
  throw InvalidArgumentError("unknown delivery order '" + std::string(name) + "'");
}

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kInput:
      return "input";
    case EventKind::kKey:
      return "key";
    case EventKind::kBroadcast:
      return "broadcast";
    case EventKind::kDeliver:
      return "deliver";
    case EventKind::kResult:
      return "result";
  }
  return "?";
}

std::vector<const TranscriptEvent*> Transcript::OfKind(EventKind kind) const {
  std::vector<const TranscriptEvent*> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

bool Transcript::AllAgree() const {
  const auto results = OfKind(EventKind::kResult);
  if (results.size() != static_cast<size_t>(config.users)) return false;
  return std::all_of(results.begin(), results.end(), [&](const auto* r) {
    return r->payload == results.front()->payload;
  });
}

size_t Transcript::BroadcastSymbols() const {
  size_t n = 0;
  for (const auto* e : OfKind(EventKind::kBroadcast)) n += e->payload.size();
  return n;
}

Transcript Simulator::Run(const SimConfig& cfg) {
  ValidateConfig(cfg);
  const auto& params = cfg.params;
  const int k_users = params.users();

  if (used_epochs_.contains(cfg.epoch)) {
    throw KeyReuseError("epoch " + std::to_string(cfg.epoch) +
                        " was already run");
  }
  auto fingerprint = KeyFingerprint(cfg);
  if (used_key_material_.contains(fingerprint)) {
    throw KeyReuseError(cfg.source_key
                            ? "explicit source key already used in an earlier epoch"
                            : "dealer key for seed " + std::to_string(cfg.seed) +
                                  " already used in an earlier epoch");
  }
  used_epochs_.insert(cfg.epoch);
  used_key_material_.insert(std::move(fingerprint));

  Transcript t;
  t.config = ConfigEcho{cfg.epoch,
                        k_users,
                        params.collusion(),
                        params.ring().modulus(),
                        params.ring().length(),
                        cfg.seed,
                        cfg.inputs.has_value(),
                        cfg.source_key.has_value(),
                        cfg.delivery};
  uint64_t tick = 0;
  auto record = [&](EventKind kind, int sender, int receiver,
                    const RingVector& v) {
    t.events.push_back({kind, ++tick, sender, receiver, v.coords()});
  };

  // Dealer phase.
  std::vector<RingVector> inputs;
  if (cfg.inputs) {
    inputs = *cfg.inputs;
  } else {
    DeterministicRandomSource rng(DeriveSeed(cfg.seed, kInputStream));
    for (int k = 0; k < k_users; ++k) {
      inputs.push_back(SampleUniform(params.ring(), rng));
    }
  }
  SourceKey source = [&] {
    if (cfg.source_key) return *cfg.source_key;
    DeterministicRandomSource rng(DeriveSeed(cfg.seed, kDealerStream));
    return GenSourceKey(params, rng);
  }();
  std::vector<IndividualKey> keys = DeriveKeys(source);

  std::vector<UserState> users;
  users.reserve(k_users);
  for (int k = 1; k <= k_users; ++k) {
    users.push_back(AsUser(k, [&] {
      return UserState(k, params, cfg.epoch, inputs[k - 1], keys[k - 1]);
    }));
  }
  for (int k = 1; k <= k_users; ++k) {
    record(EventKind::kInput, 0, k, inputs[k - 1]);
  }
  for (int k = 1; k <= k_users; ++k) {
    record(EventKind::kKey, 0, k, keys[k - 1].mask);
  }

  // Broadcast phase.
  std::vector<Message> messages;
  messages.reserve(k_users);
  for (auto& u : users) {
    messages.push_back(AsUser(u.user_id(), [&] { return u.MakeMessage(); }));
    record(EventKind::kBroadcast, u.user_id(), 0, messages.back().payload);
  }

  // Delivery phase over orthogonal channels: one delivery per tick.
  for (const auto& [sender, receiver] : DeliverySchedule(cfg)) {
    const Message& m = messages[sender - 1];
    if (injector_ != nullptr && injector_->Drop(m, receiver)) continue;
    AsUser(receiver, [&] { users[receiver - 1].AcceptMessage(m); });
    record(EventKind::kDeliver, sender, receiver, m.payload);
  }

  // Recovery phase.
  for (auto& u : users) {
    AggregateResult r = [&] {
      try {
        return u.RecoverSum();
      } catch (const NotReadyError& e) {
        throw LivenessError("user " + std::to_string(u.user_id()) +
                            ": timed out, " + e.what());
      }
    }();
    record(EventKind::kResult, u.user_id(), 0, r.value);
  }
  return t;
}

Transcript RunSimulation(const SimConfig& cfg) { return Simulator().Run(cfg); }

std::vector<Transcript> RunBatch(std::span<const SimConfig> configs,
                                 int workers) {
  std::set<uint64_t> epochs;
  std::set<std::vector<uint64_t>> material;
  for (const auto& cfg : configs) {
    if (!epochs.insert(cfg.epoch).second) {
      throw KeyReuseError("epoch " + std::to_string(cfg.epoch) +
                          " appears twice in the batch");
    }
    if (!material.insert(KeyFingerprint(cfg)).second) {
      throw KeyReuseError("key material repeated in the batch (epoch " +
                          std::to_string(cfg.epoch) + ")");
    }
  }

  std::vector<std::optional<Transcript>> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = RunSimulation(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<Transcript> result;
  result.reserve(configs.size());
  for (size_t i = 0; i < configs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    result.push_back(std::move(*out[i]));
  }
  return result;
}

std::string SerializeTranscript(const Transcript& t) {
  const auto& c = t.config;
  const int width = HexWidth(c.modulus);
  std::ostringstream out;
  out << kTranscriptHeader << "\n";
  out << "config epoch=" << c.epoch << " users=" << c.users
      << " collusion=" << c.collusion << " modulus=" << c.modulus
      << " len=" << c.length << " seed=" << c.seed
      << " inputs=" << (c.explicit_inputs ? "explicit" : "random")
      << " keys=" << (c.explicit_keys ? "explicit" : "dealer")
      << " delivery=" << DeliveryOrderName(c.delivery) << "\n";
  for (const auto& e : t.events) {
    out << EventKindName(e.kind) << " tick=" << e.tick << " sender=" << e.sender
        << " receiver=" << e.receiver << " payload=" << EncodeHex(e.payload, width)
        << "\n";
  }
  return out.str();
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, size_t line_no)
      : line_(line), line_no_(line_no) {}

  std::string_view Word() {
    const size_t end = std::min(line_.find(' ', pos_), line_.size());
    if (pos_ >= line_.size() || end == pos_) Fail("missing field");
    std::string_view w = line_.substr(pos_, end - pos_);
    pos_ = end == line_.size() ? end : end + 1;
    return w;
  }

  std::string_view Field(std::string_view key) {
    std::string_view w = Word();
    if (w.size() <= key.size() || w.substr(0, key.size()) != key ||
        w[key.size()] != '=') {
      Fail("expected field '" + std::string(key) + "'");
    }
    return w.substr(key.size() + 1);
  }

  uint64_t Number(std::string_view key) {
    std::string_view v = Field(key);
    uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      Fail("bad number for '" + std::string(key) + "'");
    }
    return n;
  }

  void End() {
    if (pos_ != line_.size()) Fail("trailing data");
  }

  [[noreturn]] void Fail(const std::string& why) const {
    throw ParseError("transcript line " + std::to_string(line_no_) + ": " + why);
  }

 private:
  std::string_view line_;
  size_t line_no_;
  size_t pos_ = 0;
};

std::vector<uint64_t> DecodeHex(std::string_view hex, int width, size_t length,
                                const LineParser& lp) {
  if (hex.size() != length * width) lp.Fail("payload has wrong length");
  std::vector<uint64_t> out(length, 0);
  for (size_t i = 0; i < hex.size(); ++i) {
    const char ch = hex[i];
    uint64_t d;
    if (ch >= '0' && ch <= '9') {
      d = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      d = ch - 'a' + 10;
    } else {
      lp.Fail("payload is not lowercase hex");
    }
    out[i / width] = (out[i / width] << 4) | d;
  }
  return out;
}

}  // namespace

Transcript ParseTranscript(std::string_view text) {
  std::vector<std::string_view> lines;
  for (size_t pos = 0; pos < text.size();) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty() || lines[0] != kTranscriptHeader) {
    throw ParseError("transcript: missing header '" +
                     std::string(kTranscriptHeader) + "'");
  }
  if (lines.size() < 2) throw ParseError("transcript: missing config record");

  Transcript t;
  {
    LineParser lp(lines[1], 2);
    if (lp.Word() != "config") lp.Fail("expected config record");
    auto& c = t.config;
    c.epoch = lp.Number("epoch");
    c.users = static_cast<int>(lp.Number("users"));
    c.collusion = static_cast<int>(lp.Number("collusion"));
    c.modulus = lp.Number("modulus");
    c.length = lp.Number("len");
    c.seed = lp.Number("seed");
    const auto inputs = lp.Field("inputs");
    if (inputs != "random" && inputs != "explicit") lp.Fail("bad inputs mode");
    c.explicit_inputs = inputs == "explicit";
    const auto keys = lp.Field("keys");
    if (keys != "dealer" && keys != "explicit") lp.Fail("bad keys mode");
    c.explicit_keys = keys == "explicit";
    try {
      c.delivery = ParseDeliveryOrder(lp.Field("delivery"));
      ProtocolParams(c.users, c.collusion, RingParams(c.modulus, c.length));
    } catch (const DsaError& e) {
      lp.Fail(e.what());
    }
    lp.End();
  }

  const int width = HexWidth(t.config.modulus);
  for (size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    LineParser lp(lines[i], i + 1);
    const std::string_view kind_name = lp.Word();
    TranscriptEvent e{};
    bool known = false;
    for (EventKind k : {EventKind::kInput, EventKind::kKey, EventKind::kBroadcast,
                        EventKind::kDeliver, EventKind::kResult}) {
      if (EventKindName(k) == kind_name) {
        e.kind = k;
        known = true;
      }
    }
    if (!known) lp.Fail("unknown event kind '" + std::string(kind_name) + "'");
    e.tick = lp.Number("tick");
    e.sender = static_cast<int>(lp.Number("sender"));
    e.receiver = static_cast<int>(lp.Number("receiver"));
    e.payload = DecodeHex(lp.Field("payload"), width, t.config.length, lp);
    lp.End();
    t.events.push_back(std::move(e));
  }
  return t;
}

bool Replay(const Transcript& t) {
  const auto& c = t.config;
  std::optional<ProtocolParams> params;
  try {
    params.emplace(c.users, c.collusion, RingParams(c.modulus, c.length));
  } catch (const DsaError& e) {
    throw ParseError(std::string("transcript config: ") + e.what());
  }
  SimConfig cfg{*params, c.seed, c.epoch, c.delivery, std::nullopt, std::nullopt};

  try {
    if (c.explicit_inputs) {
      std::vector<RingVector> inputs;
      for (const auto* e : t.OfKind(EventKind::kInput)) {
        inputs.emplace_back(params->ring(), e->payload);
      }
      cfg.inputs = std::move(inputs);
    }
    if (c.explicit_keys) {
      std::vector<RingVector> noise;
      for (const auto* e : t.OfKind(EventKind::kKey)) {
        if (e->receiver >= 1 && e->receiver < c.users) {
          noise.emplace_back(params->ring(), e->payload);
        }
      }
      cfg.source_key = SourceKey(*params, std::move(noise));
    }
    return RunSimulation(cfg) == t;
  } catch (const DsaError&) {
    // Tampered symbols that no longer fit the ring, or a missing record.
    return false;
  }
}

bool ReplayText(std::string_view text) { return Replay(ParseTranscript(text)); }

}  // namespace dsa
