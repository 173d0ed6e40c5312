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

#ifndef SEAL_OPERATORS_HPP
#define SEAL_OPERATORS_HPP

#include <string>

#include "seal/error.hpp"
#include "seal/matrix.hpp"

namespace seal {

/// The bilinear operator combining adapter factors with the passport.
/// Fixed for the lifetime of an adapter.
enum class OperatorKind { matmul, hadamard, kronecker };

inline std::string to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::matmul: return "matmul";
    case OperatorKind::hadamard: return "hadamard";
    case OperatorKind::kronecker: return "kronecker";
  }
  throw ValidationError("unknown operator");
}

inline OperatorKind parse_operator(const std::string& name) {
  if (name == "matmul") return OperatorKind::matmul;
  if (name == "hadamard") return OperatorKind::hadamard;
  if (name == "kronecker") return OperatorKind::kronecker;
  throw ValidationError("unknown operator: " + name);
}

/// Applies the generalized combination lhs (op) rhs.
inline Matrix star(const Matrix& lhs, const Matrix& rhs, OperatorKind op) {
  switch (op) {
    case OperatorKind::matmul: return matmul(lhs, rhs);
    case OperatorKind::hadamard: return hadamard(lhs, rhs);
    case OperatorKind::kronecker: return kron(lhs, rhs);
  }
  throw ValidationError("unknown operator");
}

}  // namespace seal

#endif  // SEAL_OPERATORS_HPP
