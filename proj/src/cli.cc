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

#include "dsa/cli.h"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "dsa/errors.h"
#include "dsa/keying.h"
#include "dsa/netsim.h"
#include "dsa/oracle.h"
#include "dsa/verifier.h"

namespace dsa::cli {
namespace {

constexpr int kSchemaVersion = 1;

// Flags shared by every subcommand; each has a config-file key of the same
// name (without dashes).
struct CliConfig {
  int users = 3;
  int collusion = 0;
  uint64_t modulus = 2;
  size_t len = 1;
  uint64_t seed = 0;
  std::optional<uint64_t> epoch;
  std::optional<uint64_t> budget;
  std::string out;
  std::string input;
  std::string checks;
  std::string format = "text";
  std::string delivery = "round-robin";
  std::optional<int> users_max;
  int workers = 1;
  bool timing = false;
  int schema_version = kSchemaVersion;
  std::string transcript;
};

ProtocolParams MakeParams(const CliConfig& c, int users) {
  return ProtocolParams(users, c.collusion, RingParams(c.modulus, c.len));
}

uint64_t ResolveBudget(const CliConfig& c) {
  if (c.budget) return *c.budget;
  if (const char* env = std::getenv("DSA_BUDGET")) {
    std::string_view v(env);
    uint64_t b = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), b);
    if (ec != std::errc() || ptr != v.data() + v.size() || b == 0) {
      throw InvalidArgumentError("DSA_BUDGET is not a positive integer: " +
                                 std::string(v));
    }
    return b;
  }
  return kDefaultWorldBudget;
}

std::vector<RingVector> ReadInputs(const std::string& path,
                                   const ProtocolParams& params) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open input file " + path);
  std::vector<RingVector> inputs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<uint64_t> coords;
    uint64_t v;
    while (fields >> v) coords.push_back(v);
    if (!fields.eof()) {
      throw InvalidArgumentError("input file: non-numeric symbol in '" + line + "'");
    }
    inputs.emplace_back(params.ring(), std::move(coords));
  }
  return inputs;
}

std::vector<std::string> SplitChecks(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int CmdRun(const CliConfig& c, std::ostream& out) {
  const ProtocolParams params = MakeParams(c, c.users);
  SimConfig cfg{params, c.seed, c.epoch.value_or(c.seed),
                ParseDeliveryOrder(c.delivery), std::nullopt, std::nullopt};
  if (!c.input.empty()) cfg.inputs = ReadInputs(c.input, params);

  const Transcript t = RunSimulation(cfg);
  const std::string path = c.out.empty() ? "transcript.dsa" : c.out;
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgumentError("cannot write " + path);
    f << SerializeTranscript(t);
  }
  const auto results = t.OfKind(EventKind::kResult);
  const bool agree = t.AllAgree();
  const auto sum = RingVector(params.ring(), results.front()->payload);
  if (c.format == "machine") {
    out << "run epoch=" << t.config.epoch << " params=" << params.DebugString()
        << " sum=" << sum.DebugString() << " agree=" << agree
        << " transcript=" << path << "\n";
  } else {
    out << "epoch " << t.config.epoch << ", " << params.DebugString() << ", seed "
        << c.seed << "\n";
    for (const auto* r : results) {
      out << "  user " << r->sender << " recovered "
          << RingVector(params.ring(), r->payload).DebugString() << "\n";
    }
    out << "sum " << sum.DebugString() << "; "
        << (agree ? "all users agree" : "USERS DISAGREE") << "\n";
    out << "transcript written to " << path << "\n";
  }
  return agree ? kExitOk : kExitFailure;
}

int CmdVerify(const CliConfig& c, std::ostream& out) {
  const ProtocolParams params = MakeParams(c, c.users);
  VerifyOptions options{ResolveBudget(c), c.workers};
  const auto reports = RunChecks(params, SplitChecks(c.checks), options, c.seed);
  const std::string machine = FormatMachineReport(reports, c.timing);
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InvalidArgumentError("cannot write " + c.out);
    f << machine;
  }
  out << (c.format == "machine" ? machine : FormatReportTable(reports, c.timing));
  for (const auto& r : reports) {
    if (!r.pass) return kExitFailure;
  }
  return kExitOk;
}

int CmdRates(const CliConfig& c, std::ostream& out) {
  const int last = c.users_max.value_or(c.users);
  std::ostringstream table;
  if (c.format != "machine") {
    char line[160];
    std::snprintf(line, sizeof(line), "%4s %4s %10s %10s %10s  %-12s %s\n", "K",
                  "T", "R_X", "R_Z", "R_ZSigma", "bound", "optimal?");
    table << line;
  }
  bool all_members = true;
  for (int k = c.users; k <= last; ++k) {
    const ProtocolParams params = MakeParams(c, k);
    const RateTriple rates = MeasureRates(params, c.seed);
    const CheckReport r = CheckRateRegion(k, rates);
    all_members = all_members && r.pass;
    const std::string bound = "(1,1," + std::to_string(k - 1) + ")";
    if (c.format == "machine") {
      table << "rate K=" << k << " T=" << c.collusion << " rx=" << Fmt(rates.rx)
            << " rz=" << Fmt(rates.rz) << " rzs=" << Fmt(rates.rzs)
            << " bound=" << bound << " member=" << r.pass
            << " optimal=" << r.optimal << "\n";
    } else {
      char line[160];
      std::snprintf(line, sizeof(line), "%4d %4d %10s %10s %10s  %-12s %s\n", k,
                    c.collusion, Fmt(rates.rx).c_str(), Fmt(rates.rz).c_str(),
                    Fmt(rates.rzs).c_str(), bound.c_str(),
                    r.optimal ? "yes" : (r.pass ? "no" : "outside region"));
      table << line;
    }
  }
  out << table.str();
  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InvalidArgumentError("cannot write " + c.out);
    f << table.str();
  }
  return all_members ? kExitOk : kExitFailure;
}

int CmdReplay(const CliConfig& c, std::ostream& out) {
  std::ifstream f(c.transcript, std::ios::binary);
  if (!f) throw InvalidArgumentError("cannot open " + c.transcript);
  std::stringstream buf;
  buf << f.rdbuf();
  const bool ok = ReplayText(buf.str());
  out << (c.format == "machine" ? (ok ? "replay match=1\n" : "replay match=0\n")
                                : (ok ? "replay: transcript reproduced exactly\n"
                                      : "replay: MISMATCH\n"));
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Decentralized secure aggregation: simulate, verify, tabulate rates"};
  app.name("dsa");
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; flags override it");

  CliConfig c;
  app.add_option("--schema-version", c.schema_version, "config schema version")
      ->check(CLI::Range(kSchemaVersion, kSchemaVersion));
  app.add_option("--users", c.users, "number of users K");
  app.add_option("--collusion", c.collusion, "collusion threshold T");
  app.add_option("--modulus", c.modulus, "ring modulus q");
  app.add_option("--len", c.len, "symbols per input L");
  app.add_option("--seed", c.seed, "seed for inputs, keys and delivery shuffle");
  app.add_option("--epoch", c.epoch, "round identifier (defaults to the seed)");
  app.add_option("--budget", c.budget,
                 "max enumerated worlds (else DSA_BUDGET, else 2^24)");
  app.add_option("--out", c.out, "output file");
  app.add_option("--input", c.input, "explicit inputs: K lines of L symbols");
  app.add_option("--checks", c.checks, "comma-separated checks (default: all)");
  app.add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--delivery", c.delivery, "delivery order")
      ->check(CLI::IsMember({"round-robin", "seeded-shuffle"}));
  app.add_option("--users-max", c.users_max, "rates: sweep K up to this value");
  app.add_option("--workers", c.workers, "enumeration threads")
      ->check(CLI::Range(1, 64));
  app.add_flag("--timing", c.timing, "include runtimes in verify reports");

  auto* run = app.add_subcommand("run", "simulate one aggregation round");
  auto* verify = app.add_subcommand("verify", "exhaustive information-theoretic checks");
  auto* rates = app.add_subcommand("rates", "measured rates against the optimal region");
  auto* replay = app.add_subcommand("replay", "re-execute a transcript and compare");
  replay->add_option("transcript", c.transcript, "transcript file")->required();
  for (auto* sub : {run, verify, rates, replay}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return CmdRun(c, out);
    if (*verify) return CmdVerify(c, out);
    if (*rates) return CmdRates(c, out);
    return CmdReplay(c, out);
  } catch (const TrivialRegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const DsaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace dsa::cli
