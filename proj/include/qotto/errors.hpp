// Copyright 2026 The qotto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qotto {

// Bad caller input: out-of-range site, time outside a stroke, T <= 0, ...
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical contract was breached (non-Hermitian input, not a state,
// non-finite Hamiltonian sample, broken conservation law).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The local counter-diabatic coefficient has a vanishing denominator.
class SingularPointError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// A spectrum is too degenerate for the requested operation.
class DegeneracyError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// Malformed or invalid configuration; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested problem size exceeds what the dense backend will allocate.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qotto
