// Copyright 2026 The omdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMDP_ERRORS_H_
#define OMDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace omdp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: dimension mismatch, malformed document, bad parameter.
// The CLI maps this family to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the desk-scale limit on |A|^|S|.
class SizeGuardError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A run directory or input file does not exist.
class NotFoundError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failure. The CLI maps this family to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The induced chain has no unique stationary distribution.
class ErgodicityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An iterative solver failed to converge or certify its answer.
class SolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An occupancy measure violates the flow constraints of the model.
class InvalidOccupancyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace omdp

#endif  // OMDP_ERRORS_H_
