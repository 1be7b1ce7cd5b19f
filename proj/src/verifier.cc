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

#include "dsa/verifier.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <utility>

#include "dsa/errors.h"
#include "dsa/protocol.h"

namespace dsa {
namespace {

double Now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string SetString(const std::vector<int>& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::vector<int> AllBut(int users, int k) {
  std::vector<int> out;
  for (int i = 1; i <= users; ++i) {
    if (i != k) out.push_back(i);
  }
  return out;
}

std::vector<int> AllUsers(int users) { return AllBut(users, 0); }

InstanceRecord AtLeast(std::string label, double measured, double bound) {
  return {std::move(label), measured, bound,
          measured >= bound - kEntropyTolerance,
          std::fabs(measured - bound) <= kEntropyTolerance};
}

InstanceRecord Equal(std::string label, double measured, double bound) {
  const bool eq = std::fabs(measured - bound) <= kEntropyTolerance;
  return {std::move(label), measured, bound, eq, eq};
}

InstanceRecord Exact(std::string label, double measured, bool holds) {
  return {std::move(label), measured, 0.0, holds, holds};
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12f", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string CollusionSet::Label() const {
  return "k=" + std::to_string(observer) + ",T=" + SetString(members);
}

std::vector<CollusionSet> EnumerateCollusionSets(int users, int observer,
                                                 int max_size) {
  const std::vector<int> others = AllBut(users, observer);
  const int n = static_cast<int>(others.size());
  std::vector<CollusionSet> out;
  for (int size = 0; size <= std::min(max_size, n); ++size) {
    // Lexicographic combinations of `size` positions out of n.
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      CollusionSet c{observer, {}, {}};
      std::vector<bool> in(n, false);
      for (int p : pick) in[p] = true;
      for (int i = 0; i < n; ++i) (in[i] ? c.members : c.complement).push_back(others[i]);
      out.push_back(std::move(c));
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

RateTriple MeasureRates(const ProtocolParams& params, uint64_t seed) {
  DeterministicRandomSource rng(seed);
  const SourceKey src = GenSourceKey(params, rng);
  const auto keys = DeriveKeys(src);
  UserState user(1, params, 0, SampleUniform(params.ring(), rng), keys[0]);
  const Message m = user.MakeMessage();
  const double input_bits = params.ring().bits_per_vector();
  return RateTriple{m.bit_size() / input_bits,
                    keys[0].mask.params().bits_per_vector() / input_bits,
                    src.bit_size() / input_bits};
}

bool CheckReport::AllTight() const {
  return std::all_of(instances.begin(), instances.end(),
                     [](const InstanceRecord& r) { return r.tight; });
}

Verdict RejectTrivialRegime(int users, int collusion) {
  if (users < 3 || collusion < 0 || IsTrivialRegime(users, collusion)) {
    return Verdict::kReject;
  }
  return Verdict::kAccept;
}

CheckReport CheckRateRegion(int users, const RateTriple& measured) {
  CheckReport r;
  r.check = "rates";
  r.params = "K=" + std::to_string(users);
  r.relation = "R_X >= 1, R_Z >= 1, R_ZSigma >= K-1";
  r.instances.push_back(AtLeast("R_X", measured.rx, 1.0));
  r.instances.push_back(AtLeast("R_Z", measured.rz, 1.0));
  r.instances.push_back(AtLeast("R_ZSigma", measured.rzs, users - 1.0));
  r.pass = std::all_of(r.instances.begin(), r.instances.end(),
                       [](const InstanceRecord& i) { return i.pass; });
  r.optimal = r.pass && r.AllTight();
  return r;
}

Verifier::Verifier(ProtocolParams params, Scheme scheme, VerifyOptions options)
    : params_(params),
      options_(options),
      space_(params, std::move(scheme), options.budget, options.workers) {}

CheckReport Verifier::Start(std::string name, std::string relation) const {
  CheckReport r;
  r.check = std::move(name);
  r.params = params_.DebugString() + ",scheme=" + space_.scheme().name;
  r.relation = std::move(relation);
  r.world_count = space_.world_count();
  return r;
}

void Verifier::Finish(CheckReport& report, double started) const {
  report.pass = std::all_of(report.instances.begin(), report.instances.end(),
                            [](const InstanceRecord& i) { return i.pass; });
  report.runtime_seconds = Now() - started;
}

CheckReport Verifier::CheckRecovery() const {
  const double t0 = Now();
  auto r = Start("recovery", "H(SumW | X_-k, W_k, Z_k) = 0");
  const int k_users = params_.users();
  for (int k = 1; k <= k_users; ++k) {
    const auto others = AllBut(k_users, k);
    const std::vector<VariableSpec> vars = {
        var::SumW(),
        var::Tuple("G", {var::Messages(others), var::W(k), var::Z(k)})};
    const auto d = Tabulate(space_, vars, options_.workers);
    r.instances.push_back(Exact("k=" + std::to_string(k),
                                EntropyBits(d, {"SumW"}, {"G"}),
                                IsDetermined(d, {"SumW"}, {"G"})));
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckSecurity(int max_collusion) const {
  const double t0 = Now();
  if (max_collusion < 0) max_collusion = params_.collusion();
  auto r = Start("security", "I(X_-k; W_-k | SumW, W_k, Z_k, C_T) = 0 [exact]");
  const int k_users = params_.users();
  for (int k = 1; k <= k_users; ++k) {
    const auto others = AllBut(k_users, k);
    for (const auto& c : EnumerateCollusionSets(k_users, k, max_collusion)) {
      const std::vector<VariableSpec> vars = {
          var::Tuple("A", {var::Messages(others)}),
          var::Tuple("B", {var::Inputs(others)}),
          var::Tuple("G", {var::SumW(), var::W(k), var::Z(k),
                           var::Collection(c.members)})};
      const auto d = Tabulate(space_, vars, options_.workers);
      r.instances.push_back(Exact(c.Label(), ConditionalMiBits(d, {"A"}, {"B"}, {"G"}),
                                  ConditionalMiIsZero(d, {"A"}, {"B"}, {"G"})));
    }
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckLemma1() const {
  const double t0 = Now();
  auto r = Start("lemma1", "H(X_k | {W_i,Z_i}_{i!=k}) >= L log2 q");
  const int k_users = params_.users();
  const double bits = params_.ring().bits_per_vector();
  for (int k = 1; k <= k_users; ++k) {
    const std::vector<VariableSpec> vars = {
        var::X(k), var::Tuple("G", {var::Collection(AllBut(k_users, k))})};
    const auto d = Tabulate(space_, vars, options_.workers);
    r.instances.push_back(AtLeast("k=" + std::to_string(k),
                                  EntropyBits(d, {vars[0].name}, {"G"}), bits));
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckCorollary1() const {
  const double t0 = Now();
  auto r = Start("corollary1", "H(X_Tbar | C_T, W_k, Z_k) >= |Tbar| L log2 q");
  const int k_users = params_.users();
  const double bits = params_.ring().bits_per_vector();
  for (int k = 1; k <= k_users; ++k) {
    for (const auto& c : EnumerateCollusionSets(k_users, k, k_users - 3)) {
      const std::vector<VariableSpec> vars = {
          var::Tuple("A", {var::Messages(c.complement)}),
          var::Tuple("G", {var::Collection(c.members), var::W(k), var::Z(k)})};
      const auto d = Tabulate(space_, vars, options_.workers);
      r.instances.push_back(AtLeast(c.Label(), EntropyBits(d, {"A"}, {"G"}),
                                    static_cast<double>(c.complement.size()) * bits));
    }
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckLemma2() const {
  const double t0 = Now();
  auto r = Start("lemma2", "I(X_k; W_k | W_k', Z_k') = 0 [exact]");
  const int k_users = params_.users();
  for (int k = 1; k <= k_users; ++k) {
    for (int kp = 1; kp <= k_users; ++kp) {
      if (kp == k) continue;
      const std::vector<VariableSpec> vars = {
          var::Tuple("A", {var::X(k)}), var::Tuple("B", {var::W(k)}),
          var::Tuple("G", {var::W(kp), var::Z(kp)})};
      const auto d = Tabulate(space_, vars, options_.workers);
      r.instances.push_back(
          Exact("k=" + std::to_string(k) + ",k'=" + std::to_string(kp),
                ConditionalMiBits(d, {"A"}, {"B"}, {"G"}),
                ConditionalMiIsZero(d, {"A"}, {"B"}, {"G"})));
    }
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckLemma3() const {
  const double t0 = Now();
  auto r = Start("lemma3", "I(X_Tbar; W_Tbar | C_T, W_k, Z_k) = L log2 q");
  const int k_users = params_.users();
  const double bits = params_.ring().bits_per_vector();
  for (int k = 1; k <= k_users; ++k) {
    for (const auto& c : EnumerateCollusionSets(k_users, k, k_users - 3)) {
      const std::vector<VariableSpec> vars = {
          var::Tuple("A", {var::Messages(c.complement)}),
          var::Tuple("B", {var::Inputs(c.complement)}),
          var::Tuple("G", {var::Collection(c.members), var::W(k), var::Z(k)})};
      const auto d = Tabulate(space_, vars, options_.workers);
      r.instances.push_back(
          Equal(c.Label(), ConditionalMiBits(d, {"A"}, {"B"}, {"G"}), bits));
    }
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckLemma4() const {
  const double t0 = Now();
  auto r = Start("lemma4", "H(Z_Tbar | Z_T, Z_k) >= (K-2-|T|) L log2 q");
  const int k_users = params_.users();
  const double bits = params_.ring().bits_per_vector();
  for (int k = 1; k <= k_users; ++k) {
    for (const auto& c : EnumerateCollusionSets(k_users, k, k_users - 3)) {
      const std::vector<VariableSpec> vars = {
          var::Tuple("A", {var::Keys(c.complement)}),
          var::Tuple("G", {var::Keys(c.members), var::Z(k)})};
      const auto d = Tabulate(space_, vars, options_.workers);
      const double bound =
          static_cast<double>(k_users - 2 - static_cast<int>(c.members.size())) * bits;
      r.instances.push_back(AtLeast(c.Label(), EntropyBits(d, {"A"}, {"G"}), bound));
    }
  }
  Finish(r, t0);
  return r;
}

CheckReport Verifier::CheckSourceKeyEntropy() const {
  const double t0 = Now();
  auto r = Start("source-key-entropy",
                 "H(Z_1..Z_K) = (K-1) L log2 q [support q^((K-1)L), uniform]");
  const int k_users = params_.users();
  const std::vector<VariableSpec> vars = {
      var::Tuple("Z", {var::Keys(AllUsers(k_users))})};
  const auto d = Tabulate(space_, vars, options_.workers);
  const auto marginal = d.Marginal(std::vector<size_t>{0});
  const uint64_t first = marginal.begin()->second;
  const bool uniform = std::all_of(marginal.begin(), marginal.end(),
                                   [&](const auto& kv) { return kv.second == first; });
  uint64_t expected_support = 1;
  for (int i = 0; i + 1 < k_users; ++i) expected_support *= space_.atom_radix();
  const bool holds = uniform && marginal.size() == expected_support;
  const double measured = EntropyBits(d, {"Z"});
  const double bound = (k_users - 1) * params_.ring().bits_per_vector();
  r.instances.push_back({"support=" + std::to_string(marginal.size()), measured,
                         bound, holds,
                         holds && std::fabs(measured - bound) <= kEntropyTolerance});
  Finish(r, t0);
  return r;
}

const std::vector<std::string>& CheckNames() {
  static const std::vector<std::string> kNames = {
      "recovery", "security", "rates",  "lemma1",            "corollary1",
      "lemma2",   "lemma3",   "lemma4", "source-key-entropy"};
  return kNames;
}

std::vector<CheckReport> RunChecks(const ProtocolParams& params,
                                   const std::vector<std::string>& names,
                                   const VerifyOptions& options, uint64_t seed) {
  for (const auto& n : names) {
    if (std::find(CheckNames().begin(), CheckNames().end(), n) ==
        CheckNames().end()) {
      throw InvalidArgumentError("unknown check '" + n + "'");
    }
  }
  auto selected = [&](const std::string& n) {
    return names.empty() || std::find(names.begin(), names.end(), n) != names.end();
  };
  std::optional<Verifier> verifier;
  std::vector<CheckReport> out;
  for (const auto& name : CheckNames()) {
    if (!selected(name)) continue;
    if (name == "rates") {
      const double t0 = Now();
      out.push_back(CheckRateRegion(params.users(), MeasureRates(params, seed)));
      out.back().params = params.DebugString();
      out.back().runtime_seconds = Now() - t0;
      continue;
    }
    if (!verifier) verifier.emplace(params, OptimalScheme(), options);
    if (name == "recovery") out.push_back(verifier->CheckRecovery());
    if (name == "security") out.push_back(verifier->CheckSecurity());
    if (name == "lemma1") out.push_back(verifier->CheckLemma1());
    if (name == "corollary1") out.push_back(verifier->CheckCorollary1());
    if (name == "lemma2") out.push_back(verifier->CheckLemma2());
    if (name == "lemma3") out.push_back(verifier->CheckLemma3());
    if (name == "lemma4") out.push_back(verifier->CheckLemma4());
    if (name == "source-key-entropy") out.push_back(verifier->CheckSourceKeyEntropy());
  }
  return out;
}

std::string FormatMachineReport(const std::vector<CheckReport>& reports,
                                bool with_timing) {
  std::ostringstream out;
  out << "# dsa-report v1\n";
  for (const auto& r : reports) {
    for (const auto& i : r.instances) {
      out << "record check=" << r.check << " params=" << r.params
          << " instance=" << i.label << " measured=" << Fixed(i.measured)
          << " bound=" << Fixed(i.bound) << " pass=" << i.pass
          << " tight=" << i.tight << "\n";
    }
    out << "summary check=" << r.check << " params=" << r.params
        << " instances=" << r.instances.size() << " worlds=" << r.world_count
        << " pass=" << r.pass;
    if (r.check == "rates") out << " optimal=" << r.optimal;
    if (with_timing) out << " runtime=" << Fixed(r.runtime_seconds);
    out << " relation=\"" << r.relation << "\"\n";
  }
  return out.str();
}

std::string FormatReportTable(const std::vector<CheckReport>& reports,
                              bool with_timing) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-20s %-6s %9s %10s%s  %s\n", "check",
                "result", "instances", "worlds", with_timing ? "    runtime" : "",
                "relation");
  out << line;
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    std::string timing;
    if (with_timing) {
      char t[32];
      std::snprintf(t, sizeof(t), " %9.3fs", r.runtime_seconds);
      timing = t;
    }
    std::string relation = r.relation;
    if (r.check == "rates") relation += r.optimal ? " (optimal)" : "";
    std::snprintf(line, sizeof(line), "%-20s %-6s %9zu %10llu%s  %s\n",
                  r.check.c_str(), r.pass ? "PASS" : "FAIL", r.instances.size(),
                  static_cast<unsigned long long>(r.world_count), timing.c_str(),
                  relation.c_str());
    out << line;
  }
  out << (all ? "all checks passed\n" : "SOME CHECKS FAILED\n");
  return out.str();
}

}  // namespace dsa
