// Copyright 2026 The queuegrad Authors
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

#ifndef QUEUEGRAD_ERRORS_HPP_
#define QUEUEGRAD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace queuegrad {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data: dimension mismatches, invalid boxes, non-PSD matrices.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A problem or trace file could not be parsed.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Inconsistent run parameters (missing constants, bad step, wrong algorithm).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Non-finite or overflowing arithmetic inside an oracle or an iteration.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleProblem : public Error {
 public:
  using Error::Error;
};

// An inner iterative solve hit its iteration cap.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace queuegrad

#endif  // QUEUEGRAD_ERRORS_HPP_
