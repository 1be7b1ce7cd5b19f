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

#ifndef DSA_VERIFIER_H_
#define DSA_VERIFIER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dsa/keying.h"
#include "dsa/oracle.h"

namespace dsa {

// Tolerance for entropy equalities and inequalities, in bits. Independence is
// always decided by the exact count test instead.
inline constexpr double kEntropyTolerance = 1e-9;

// Observer k, the users T_(k) it colludes with, and the remaining peers.
struct CollusionSet {
  int observer;
  std::vector<int> members;
  std::vector<int> complement;

  std::string Label() const;
};

// Every T_(k) of [K] \ {k} with |T_(k)| <= max_size, ordered by size and then
// lexicographically.
std::vector<CollusionSet> EnumerateCollusionSets(int users, int observer,
                                                 int max_size);

// Communication, individual-key and source-key sizes per input bit.
struct RateTriple {
  double rx;
  double rz;
  double rzs;
};

// Measures the sizes of the artifacts a real round produces: the source key
// drawn by GenSourceKey, an IndividualKey and a Message from UserState.
RateTriple MeasureRates(const ProtocolParams& params, uint64_t seed);

// One evaluated instance of a check.
struct InstanceRecord {
  std::string label;
  double measured;  // bits, or the rate for rate-region rows
  double bound;     // the value it is compared to
  bool pass;
  // measured == bound within kEntropyTolerance.
  bool tight;
};

struct CheckReport {
  std::string check;
  std::string params;
  std::string relation;
  std::vector<InstanceRecord> instances;
  bool pass = true;
  uint64_t world_count = 0;
  double runtime_seconds = 0;
  // Rate-region reports only: the triple sits on the corner (1, 1, K-1).
  bool optimal = false;

  bool AllTight() const;
};

enum class Verdict { kAccept, kReject };

// Reject K < 3 and T >= K - 2; accept K >= 3 with 0 <= T <= K - 3.
Verdict RejectTrivialRegime(int users, int collusion);

// Checks R_X >= 1, R_Z >= 1, R_ZSigma >= K - 1.
CheckReport CheckRateRegion(int users, const RateTriple& measured);

struct VerifyOptions {
  uint64_t budget = kDefaultWorldBudget;
  int workers = 1;
};

// Exhaustive checks of one scheme at one parameter point. The world space is
// enumerated once and shared by every check.
class Verifier {
 public:
  // Throws BudgetError when the world space is over budget.
  explicit Verifier(ProtocolParams params, Scheme scheme = OptimalScheme(),
                    VerifyOptions options = {});

  const WorldSpace& space() const { return space_; }

  // H(SumW | {X_i}_{i != k}, W_k, Z_k) = 0 for every k.
  CheckReport CheckRecovery() const;
  // I({X_i}_{i != k}; {W_i}_{i != k} | SumW, W_k, Z_k, C_T) = 0 for every k and
  // every |T| <= `max_collusion` (defaults to the configured T). Exact.
  CheckReport CheckSecurity(int max_collusion = -1) const;
  // H(X_k | {W_i, Z_i}_{i != k}) >= L log2 q.
  CheckReport CheckLemma1() const;
  // H({X_i}_{Tbar} | C_T, W_k, Z_k) >= |Tbar| L log2 q, |T| <= K - 3.
  CheckReport CheckCorollary1() const;
  // I(X_k; W_k | W_k', Z_k') = 0 for every ordered pair. Exact.
  CheckReport CheckLemma2() const;
  // I({X_i}_{Tbar}; {W_i}_{Tbar} | C_T, W_k, Z_k) = L log2 q, |T| <= K - 3.
  CheckReport CheckLemma3() const;
  // H({Z_i}_{Tbar} | {Z_i}_T, Z_k) >= (K - 2 - |T|) L log2 q, |T| <= K - 3.
  CheckReport CheckLemma4() const;
  // H(Z_1..Z_K) = (K - 1) L log2 q, as support size q^((K-1)L) with equal
  // counts.
  CheckReport CheckSourceKeyEntropy() const;

 private:
  CheckReport Start(std::string name, std::string relation) const;
  void Finish(CheckReport& report, double started) const;

  ProtocolParams params_;
  VerifyOptions options_;
  WorldSpace space_;
};

// Names accepted by RunChecks, in canonical order.
const std::vector<std::string>& CheckNames();

// Runs the named checks ("rates" included) in canonical order. Throws
// InvalidArgumentError on an unknown name and BudgetError when an enumerating
// check is over budget.
std::vector<CheckReport> RunChecks(const ProtocolParams& params,
                                   const std::vector<std::string>& names,
                                   const VerifyOptions& options, uint64_t seed);

// One record per instance plus a summary record per check, stable field order.
std::string FormatMachineReport(const std::vector<CheckReport>& reports,
                                bool with_timing = false);
// Aligned summary table.
std::string FormatReportTable(const std::vector<CheckReport>& reports,
                              bool with_timing = false);

}  // namespace dsa

#endif  // DSA_VERIFIER_H_
