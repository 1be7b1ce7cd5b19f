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

#ifndef DSA_CLI_H_
#define DSA_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dsa::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // disagreement, failed check, replay mismatch
inline constexpr int kExitUsage = 2;    // bad flags or params, trivial regime, parse errors
inline constexpr int kExitBudget = 3;   // enumeration over budget

// Entry point behind the `dsa` binary: subcommands run, verify, rates and
// replay. args excludes the program name.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace dsa::cli

#endif  // DSA_CLI_H_
