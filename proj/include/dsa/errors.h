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

#ifndef DSA_ERRORS_H_
#define DSA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dsa {

// Root of every error raised by the library.
class DsaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built over different RingParams, or a vector of the wrong length.
class DimensionError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Wrong number of operands (empty fold, wrong key count).
class ArityError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Invalid construction arguments that are not a regime violation.
class InvalidArgumentError : public DsaError {
 public:
  using DsaError::DsaError;
};

// K = 2 or T >= K - 2: recovering the sum discloses the hidden inputs.
class TrivialRegimeError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Illegal protocol phase transition.
class StateError : public DsaError {
 public:
  using DsaError::DsaError;
};

class DuplicateError : public DsaError {
 public:
  using DsaError::DsaError;
};

class RoutingError : public DsaError {
 public:
  using DsaError::DsaError;
};

class StalenessError : public DsaError {
 public:
  using DsaError::DsaError;
};

class NotReadyError : public DsaError {
 public:
  using DsaError::DsaError;
};

// One-time-pad discipline: key material or an epoch was used twice.
class KeyReuseError : public DsaError {
 public:
  using DsaError::DsaError;
};

// A peer never delivered; raised by the simulator instead of recovering.
class LivenessError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Exhaustive enumeration would exceed the configured world budget.
class BudgetError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Unknown variable name, or a variable that cannot be encoded.
class SpecError : public DsaError {
 public:
  using DsaError::DsaError;
};

// Malformed wire bytes, key files or transcripts.
class ParseError : public DsaError {
 public:
  using DsaError::DsaError;
};

// A protocol error raised while the simulator was driving one user.
class SimulationError : public DsaError {
 public:
  SimulationError(int user, const std::string& what)
      : DsaError("user " + std::to_string(user) + ": " + what), user_(user) {}

  int user() const { return user_; }

 private:
  int user_;
};

}  // namespace dsa

#endif  // DSA_ERRORS_H_
