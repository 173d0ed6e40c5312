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

#ifndef SEAL_ADAPTER_HPP
#define SEAL_ADAPTER_HPP

#include <cmath>
#include <utility>

#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/operators.hpp"
#include "seal/passport.hpp"
#include "seal/svd.hpp"

namespace seal {

/// The frozen pretrained weight. Never updated by training.
struct BaseWeights {
  Matrix w;
};

/// ΔW = B (op) C (op) A, unscaled. Scaling by alpha/r is applied by the
/// adapter wrappers below so the raw algebra stays oracle-checkable.
inline Matrix seal_delta(const Matrix& b, const Matrix& c, const Matrix& a,
                         OperatorKind op = OperatorKind::matmul) {
  return star(star(b, c, op), a, op);
}

/// ΔW = B (op) A, the plain low-rank update.
inline Matrix lora_delta(const Matrix& b, const Matrix& a,
                         OperatorKind op = OperatorKind::matmul) {
  return star(b, a, op);
}

/// The released weight pair. Deliberately carries no passport field so it is
/// structurally indistinguishable from a plain low-rank pair.
struct PublicAdapter {
  Matrix b_pub;
  Matrix a_pub;
  OperatorKind op = OperatorKind::matmul;
  double alpha_over_r = 1.0;

  Matrix delta() const { return scale(star(b_pub, a_pub, op), alpha_over_r); }
};

/// The owner's private triple: trainable factors plus the passport set.
struct SealedAdapter {
  Matrix b_up;
  Matrix a_down;
  PassportSet passports;
  OperatorKind op = OperatorKind::matmul;
  double alpha_over_r = 1.0;

  std::size_t r() const { return passports.primary.r(); }

  Matrix delta(const Matrix& c) const {
    return scale(seal_delta(b_up, c, a_down, op), alpha_over_r);
  }

  Matrix delta(const Passport& p) const { return delta(p.matrix); }
};

/// Camouflages the primary passport into the released pair:
/// b_pub = B (op) C1 and a_pub = C2 (op) A with C1 (op) C2 = C.
/// The private extra passport is absent from the result by construction.
inline PublicAdapter hide(const SealedAdapter& adapter) {
  const DecompositionPair parts = decompose(adapter.passports.primary, adapter.op);
  PublicAdapter pub;
  pub.b_pub = star(adapter.b_up, parts.c1, adapter.op);
  pub.a_pub = star(parts.c2, adapter.a_down, adapter.op);
  pub.op = adapter.op;
  pub.alpha_over_r = adapter.alpha_over_r;
  return pub;
}

/// Rebuilds the released pair from an SVD of its product truncated to the
/// top k singular directions, splitting sqrt(sigma) between the factors.
inline PublicAdapter obfuscate_rank(const PublicAdapter& pub, std::size_t k) {
  if (pub.op != OperatorKind::matmul)
    throw ValidationError("obfuscate_rank supports the matmul operator only");
  const std::size_t r = std::min(pub.b_pub.cols(), pub.a_pub.rows());
  if (k < 1 || k > r) throw ValidationError("obfuscate_rank: k out of range");
  const SvdResult d = svd(matmul(pub.b_pub, pub.a_pub));
  Matrix b_new(d.u.rows(), k);
  Matrix a_new(k, d.vt.cols());
  for (std::size_t j = 0; j < k; ++j) {
    const double root = std::sqrt(d.sigma[j]);
    for (std::size_t i = 0; i < b_new.rows(); ++i) b_new(i, j) = d.u(i, j) * root;
    for (std::size_t i = 0; i < a_new.cols(); ++i) a_new(j, i) = d.vt(j, i) * root;
  }
  PublicAdapter out;
  out.b_pub = std::move(b_new);
  out.a_pub = std::move(a_new);
  out.op = pub.op;
  out.alpha_over_r = pub.alpha_over_r;
  return out;
}

}  // namespace seal

#endif  // SEAL_ADAPTER_HPP
