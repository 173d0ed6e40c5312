// Copyright 2026 The sealwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEAL_ERROR_HPP
#define SEAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace seal {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible matrix dimensions.
struct ShapeError : Error {
  using Error::Error;
};

// Non-convergence, NaN/Inf, or other numerical breakdown.
struct NumericalError : Error {
  using Error::Error;
};

// Input valid in shape but degenerate in content (constant image, empty
// sign-bit set, all-zero matrix where a spectrum is required).
struct DegenerateInputError : Error {
  using Error::Error;
};

// Bad parameter values (out-of-range ratio, zero rank, ...).
struct ValidationError : Error {
  using Error::Error;
};

// A precondition of the extraction algebra does not hold, e.g. claimed
// factors are rank deficient.
struct AssumptionViolation : Error {
  using Error::Error;
};

// Requested decomposition is not available for this passport.
struct UnsupportedDecomposition : Error {
  using Error::Error;
};

// Training diverged; carries the offending step index in the message.
struct TrainingFailure : Error {
  TrainingFailure(const std::string& msg, std::size_t step)
      : Error(msg + " (step " + std::to_string(step) + ")"), step_index(step) {}
  std::size_t step_index;
};

// Container role metadata does not match what the operation requires.
struct RoleError : Error {
  using Error::Error;
};

}  // namespace seal

#endif  // SEAL_ERROR_HPP
