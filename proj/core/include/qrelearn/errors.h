// Copyright 2026 The qrelearn Authors
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

#ifndef QRELEARN_ERRORS_H_
#define QRELEARN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qrelearn {

// Invalid input to a public operation: bad index, shape mismatch, violated
// precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or search would exceed its configured size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Fixed-point iteration failed to settle. Carries the rationality level at
// which it stalled and the last observed residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lambda, double residual)
      : std::runtime_error(what), lambda_(lambda), residual_(residual) {}

  double lambda() const { return lambda_; }
  double residual() const { return residual_; }

 private:
  double lambda_;
  double residual_;
};

// A condition that the implementation guarantees cannot happen did.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qrelearn

#endif  // QRELEARN_ERRORS_H_
