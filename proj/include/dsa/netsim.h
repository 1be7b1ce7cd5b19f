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

#ifndef DSA_NETSIM_H_
#define DSA_NETSIM_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsa/algebra.h"
#include "dsa/keying.h"
#include "dsa/protocol.h"

namespace dsa {

enum class DeliveryOrder { kRoundRobin, kSeededShuffle };

std::string_view DeliveryOrderName(DeliveryOrder order);
// Accepts "round-robin" and "seeded-shuffle"; throws InvalidArgumentError.
DeliveryOrder ParseDeliveryOrder(std::string_view name);

// One aggregation round. All randomness is drawn from streams derived from
// `seed`: inputs (when not explicit), the dealer's source key (when not
// explicit), and the delivery shuffle each get their own stream.
struct SimConfig {
  ProtocolParams params;
  uint64_t seed = 0;
  uint64_t epoch = 0;
  DeliveryOrder delivery = DeliveryOrder::kRoundRobin;
  // Exactly K vectors when set; random inputs otherwise.
  std::optional<std::vector<RingVector>> inputs;
  // Replaces the dealer's draw when set.
  std::optional<SourceKey> source_key;
};

enum class EventKind { kInput, kKey, kBroadcast, kDeliver, kResult };

std::string_view EventKindName(EventKind kind);

// One transcript line. `sender`/`receiver` use 0 for the environment (inputs),
// the dealer (keys) and "everyone" (broadcasts). Payload symbols are kept raw
// so a tampered transcript can still be represented and compared.
struct TranscriptEvent {
  EventKind kind;
  uint64_t tick;
  int sender;
  int receiver;
  std::vector<uint64_t> payload;

  friend bool operator==(const TranscriptEvent&,
                         const TranscriptEvent&) = default;
};

// Echo of the SimConfig scalars; enough to re-run the round together with the
// input and key events.
struct ConfigEcho {
  uint64_t epoch;
  int users;
  int collusion;
  uint64_t modulus;
  size_t length;
  uint64_t seed;
  bool explicit_inputs;
  bool explicit_keys;
  DeliveryOrder delivery;

  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct Transcript {
  ConfigEcho config;
  std::vector<TranscriptEvent> events;

  friend bool operator==(const Transcript&, const Transcript&) = default;

  std::vector<const TranscriptEvent*> OfKind(EventKind kind) const;
  // True iff there are K results and they are all equal.
  bool AllAgree() const;
  // Sum of broadcast payload sizes, in symbols.
  size_t BroadcastSymbols() const;
};

// Transcript text format, one record per line:
//   # dsa-transcript v1
//   config epoch=E users=K collusion=T modulus=q len=L seed=S
//          inputs=random|explicit keys=dealer|explicit delivery=ORDER
//   <kind> tick=N sender=S receiver=R payload=HEX
// (the config record is a single line). HEX concatenates the symbols, each as
// big-endian hex padded to the width of q-1.
inline constexpr std::string_view kTranscriptHeader = "# dsa-transcript v1";

std::string SerializeTranscript(const Transcript& t);
// Throws ParseError on any structural problem.
Transcript ParseTranscript(std::string_view text);

// Drops deliveries in tests. Never installed by RunSimulation.
class FaultInjector {
 public:
  virtual ~FaultInjector() = default;
  virtual bool Drop(const Message& m, int receiver) = 0;
};

// Runs rounds while enforcing one-time use of epochs and key material. Dealer
// keys are identified by the seed that draws them, explicit keys by value.
class Simulator {
 public:
  // Dealer, broadcast, delivery and recovery phases separated by barriers.
  // Throws KeyReuseError, SimulationError (with the offending user) and
  // LivenessError when a delivery was dropped.
  Transcript Run(const SimConfig& cfg);

  void set_fault_injector(FaultInjector* injector) { injector_ = injector; }

 private:
  std::set<uint64_t> used_epochs_;
  std::set<std::vector<uint64_t>> used_key_material_;
  FaultInjector* injector_ = nullptr;
};

// A fresh Simulator, so no reuse history.
Transcript RunSimulation(const SimConfig& cfg);

// Runs independent configs on up to `workers` threads; output is in config
// order. Epoch or key-material reuse across the batch throws KeyReuseError
// before anything runs.
std::vector<Transcript> RunBatch(std::span<const SimConfig> configs,
                                 int workers);

// Rebuilds the config from the transcript, re-runs it and compares every
// event. False on any difference, including out-of-range payload symbols.
bool Replay(const Transcript& t);
// Parses first; throws ParseError on malformed text.
bool ReplayText(std::string_view text);

}  // namespace dsa

#endif  // DSA_NETSIM_H_
