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

#ifndef SEAL_SVD_HPP
#define SEAL_SVD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "seal/error.hpp"
#include "seal/matrix.hpp"

namespace seal {

/// Thin singular value decomposition. u is m x k with orthonormal columns,
/// sigma holds k = min(m, n) nonincreasing nonnegative values, vt is k x n
/// with orthonormal rows, and u * diag(sigma) * vt reconstructs the input.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix vt;
};

namespace detail {

// One-sided Jacobi constants. Sweeps orthogonalize every column pair; the
// rotation is skipped once the pair is orthogonal to working precision.
constexpr int kSvdMaxSweeps = 60;
constexpr double kSvdPairTol = 1e-15;

inline double column_dot(const Matrix& w, std::size_t p, std::size_t q) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) s += w(i, p) * w(i, q);
  return s;
}

// Appends an orthonormal column to u at position j, orthogonal to columns
// [0, j). Used to complete the basis when the input has zero singular values.
inline void complete_column(Matrix& u, std::size_t j) {
  const std::size_t m = u.rows();
  for (std::size_t cand = 0; cand < m; ++cand) {
    std::vector<double> v(m, 0.0);
    v[cand] = 1.0;
    for (std::size_t c = 0; c < j; ++c) {
      double proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += u(i, c) * v[i];
      for (std::size_t i = 0; i < m; ++i) v[i] -= proj * u(i, c);
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm > 0.5) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = v[i] / nrm;
      return;
    }
  }
  throw NumericalError("svd: failed to complete orthonormal basis");
}

// One-sided Jacobi for m >= n. Rotates column pairs of a working copy until
// all pairs are mutually orthogonal, accumulating the rotations in v.
inline SvdResult jacobi_svd_tall(const Matrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  Matrix w = input;
  Matrix v = Matrix::identity(n);

  bool converged = false;
  for (int sweep = 0; sweep < kSvdMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = column_dot(w, p, p);
        const double aqq = column_dot(w, q, q);
        const double apq = column_dot(w, p, q);
        if (std::abs(apq) <= kSvdPairTol * std::sqrt(app * aqq)) continue;
        converged = false;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) throw NumericalError("svd: jacobi sweeps did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_dot(w, j, j));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdResult out;
  out.u = Matrix(m, n);
  out.vt = Matrix(n, n);
  out.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) out.vt(j, i) = v(i, src);
    if (sigma[src] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = w(i, src) / sigma[src];
    } else {
      complete_column(out.u, j);
    }
  }
  return out;
}

}  // namespace detail

inline SvdResult svd(const Matrix& m) {
  if (!m.all_finite()) throw NumericalError("svd: input has non-finite entries");
  if (m.rows() >= m.cols()) return detail::jacobi_svd_tall(m);
  SvdResult t = detail::jacobi_svd_tall(transpose(m));
  SvdResult out;
  out.u = transpose(t.vt);
  out.sigma = std::move(t.sigma);
  out.vt = transpose(t.u);
  return out;
}

inline double default_sv_tol(const Matrix& m, const std::vector<double>& sigma) {
  const double smax = sigma.empty() ? 0.0 : sigma.front();
  return static_cast<double>(std::max(m.rows(), m.cols())) *
         std::numeric_limits<double>::epsilon() * smax;
}

/// Moore-Penrose pseudo-inverse. Singular values above tol are inverted, the
/// rest are zeroed. tol < 0 selects the default max(m,n) * eps * sigma_max.
inline Matrix pinv(const Matrix& m, double tol = -1.0) {
  const SvdResult d = svd(m);
  if (tol < 0.0) tol = default_sv_tol(m, d.sigma);
  const std::size_t k = d.sigma.size();
  // pinv = V * diag(1/sigma) * U^T, built as (diag-scaled vt)^T * u^T.
  Matrix scaled_vt = d.vt;
  for (std::size_t i = 0; i < k; ++i) {
    const double inv = d.sigma[i] > tol ? 1.0 / d.sigma[i] : 0.0;
    for (std::size_t j = 0; j < scaled_vt.cols(); ++j) scaled_vt(i, j) *= inv;
  }
  return matmul(transpose(scaled_vt), transpose(d.u));
}

inline std::size_t numerical_rank(const Matrix& m, double tol = -1.0) {
  const SvdResult d = svd(m);
  if (tol < 0.0) tol = default_sv_tol(m, d.sigma);
  std::size_t r = 0;
  for (double s : d.sigma)
    if (s > tol) ++r;
  return r;
}

}  // namespace seal

#endif  // SEAL_SVD_HPP
