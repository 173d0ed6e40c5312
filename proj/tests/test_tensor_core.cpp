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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "seal/matrix.hpp"
#include "seal/rng.hpp"
#include "seal/svd.hpp"

using seal::Matrix;

namespace {

// Independent reference product: plain triple loop, no skipping.
Matrix matmul_oracle(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < lhs.cols(); ++k) s += lhs(i, k) * rhs(k, j);
      out(i, j) = s;
    }
  return out;
}

Matrix reconstruct(const seal::SvdResult& d) {
  Matrix us = d.u;
  for (std::size_t j = 0; j < d.sigma.size(); ++j)
    for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= d.sigma[j];
  return seal::matmul(us, d.vt);
}

double orthonormality_defect(const Matrix& m, bool columns) {
  const Matrix g = columns ? seal::matmul(seal::transpose(m), m)
                           : seal::matmul(m, seal::transpose(m));
  return seal::max_abs_diff(g, Matrix::identity(g.rows()));
}

}  // namespace

TEST_CASE("matmul identity") {
  seal::SeededRng rng(1);
  const Matrix m = rng.gaussian_matrix(3, 3);
  REQUIRE(seal::max_abs_diff(seal::matmul(Matrix::identity(3), m), m) == 0.0);
}

TEST_CASE("matmul all-ones") {
  const Matrix lhs = Matrix::filled(2, 3, 1.0);
  const Matrix rhs = Matrix::filled(3, 2, 1.0);
  const Matrix out = seal::matmul(lhs, rhs);
  REQUIRE(out.rows() == 2);
  REQUIRE(out.cols() == 2);
  for (double v : out.data()) REQUIRE(v == 3.0);
}

TEST_CASE("matmul matches triple-loop oracle") {
  seal::SeededRng rng(42);
  const Matrix lhs = rng.gaussian_matrix(4, 5);
  const Matrix rhs = rng.gaussian_matrix(5, 2);
  REQUIRE(seal::max_abs_diff(seal::matmul(lhs, rhs), matmul_oracle(lhs, rhs)) <=
          1e-12);
}

TEST_CASE("matmul shape error") {
  REQUIRE_THROWS_AS(seal::matmul(Matrix(2, 3), Matrix(2, 3)), seal::ShapeError);
}

TEST_CASE("matmul associativity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    seal::SeededRng rng(seed);
    const Matrix a = rng.gaussian_matrix(5, 7);
    const Matrix b = rng.gaussian_matrix(7, 3);
    const Matrix c = rng.gaussian_matrix(3, 6);
    const Matrix left = seal::matmul(seal::matmul(a, b), c);
    const Matrix right = seal::matmul(a, seal::matmul(b, c));
    REQUIRE(seal::rel_frobenius_diff(left, right) <= 1e-10);
  }
}

TEST_CASE("svd of diagonal") {
  const Matrix m = {{3.0, 0.0}, {0.0, 1.0}};
  const seal::SvdResult d = seal::svd(m);
  REQUIRE(d.sigma.size() == 2);
  REQUIRE(d.sigma[0] == Catch::Approx(3.0).margin(1e-12));
  REQUIRE(d.sigma[1] == Catch::Approx(1.0).margin(1e-12));
  // u and vt are signed permutations of the identity.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      REQUIRE(std::abs(std::abs(d.u(i, j)) - (i == j ? 1.0 : 0.0)) <= 1e-12);
      REQUIRE(std::abs(std::abs(d.vt(i, j)) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("svd of zero matrix") {
  const seal::SvdResult d = seal::svd(Matrix::zeros(3, 3));
  for (double s : d.sigma) REQUIRE(s == 0.0);
  REQUIRE(orthonormality_defect(d.u, true) <= 1e-10);
  REQUIRE(orthonormality_defect(d.vt, false) <= 1e-10);
}

TEST_CASE("svd reconstruction on seeded 8x8") {
  seal::SeededRng rng(7);
  const Matrix m = rng.gaussian_matrix(8, 8);
  const seal::SvdResult d = seal::svd(m);
  REQUIRE(seal::rel_frobenius_diff(reconstruct(d), m) <= 1e-10);
}

TEST_CASE("svd invariants across shapes") {
  for (std::size_t rows = 2; rows <= 16; rows += 2) {
    for (std::size_t cols = 2; cols <= 16; cols += 3) {
      seal::SeededRng rng(rows * 100 + cols);
      const Matrix m = rng.gaussian_matrix(rows, cols);
      const seal::SvdResult d = seal::svd(m);
      const std::size_t k = std::min(rows, cols);
      REQUIRE(d.sigma.size() == k);
      REQUIRE(d.u.rows() == rows);
      REQUIRE(d.u.cols() == k);
      REQUIRE(d.vt.rows() == k);
      REQUIRE(d.vt.cols() == cols);
      for (std::size_t i = 0; i + 1 < k; ++i) REQUIRE(d.sigma[i] >= d.sigma[i + 1]);
      REQUIRE(seal::rel_frobenius_diff(reconstruct(d), m) <= 1e-10);
      REQUIRE(orthonormality_defect(d.u, true) <= 1e-10);
      REQUIRE(orthonormality_defect(d.vt, false) <= 1e-10);
    }
  }
}

TEST_CASE("svd rejects non-finite input") {
  Matrix m(2, 2);
  m(0, 0) = std::nan("");
  REQUIRE_THROWS_AS(seal::svd(m), seal::NumericalError);
}

TEST_CASE("pinv of identity") {
  REQUIRE(seal::max_abs_diff(seal::pinv(Matrix::identity(4)),
                             Matrix::identity(4)) <= 1e-12);
}

TEST_CASE("pinv of rank-deficient diagonal") {
  const Matrix m = {{2.0, 0.0}, {0.0, 0.0}};
  const Matrix p = seal::pinv(m);
  REQUIRE(p(0, 0) == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(std::abs(p(0, 1)) <= 1e-12);
  REQUIRE(std::abs(p(1, 0)) <= 1e-12);
  REQUIRE(std::abs(p(1, 1)) <= 1e-12);
}

TEST_CASE("pinv right identity for wide full-rank matrix") {
  seal::SeededRng rng(3);
  const Matrix a = rng.gaussian_matrix(3, 7);
  REQUIRE(seal::max_abs_diff(seal::matmul(a, seal::pinv(a)),
                             Matrix::identity(3)) <= 1e-10);
}

TEST_CASE("pinv Moore-Penrose axioms over 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    seal::SeededRng rng(seed);
    const std::size_t rows = 2 + seed % 7;
    const std::size_t cols = 2 + (seed / 7) % 7;
    const Matrix a = rng.gaussian_matrix(rows, cols);
    const Matrix p = seal::pinv(a);
    REQUIRE(seal::rel_frobenius_diff(seal::matmul(seal::matmul(a, p), a), a) <=
            1e-9);
    REQUIRE(seal::rel_frobenius_diff(seal::matmul(seal::matmul(p, a), p), p) <=
            1e-9);
  }
}

TEST_CASE("numerical rank basics") {
  REQUIRE(seal::numerical_rank(Matrix::identity(5)) == 5);

  seal::SeededRng rng(11);
  const Matrix u = rng.gaussian_matrix(6, 1);
  const Matrix v = rng.gaussian_matrix(1, 4);
  REQUIRE(seal::numerical_rank(seal::matmul(u, v)) == 1);
}

TEST_CASE("numerical rank of a three-factor product") {
  seal::SeededRng rng(13);
  const Matrix b = rng.gaussian_matrix(8, 4);
  const Matrix c = rng.gaussian_matrix(4, 4);
  const Matrix a = rng.gaussian_matrix(4, 8);
  REQUIRE(seal::numerical_rank(seal::matmul(seal::matmul(b, c), a)) == 4);
}

TEST_CASE("kron block structure with identity") {
  seal::SeededRng rng(5);
  const Matrix m = rng.gaussian_matrix(2, 2);
  const Matrix k = seal::kron(Matrix::identity(2), m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      REQUIRE(k(i, j) == m(i, j));
      REQUIRE(k(2 + i, 2 + j) == m(i, j));
      REQUIRE(k(i, 2 + j) == 0.0);
      REQUIRE(k(2 + i, j) == 0.0);
    }
}

TEST_CASE("kron matches index-formula oracle") {
  seal::SeededRng rng(6);
  const Matrix lhs = rng.gaussian_matrix(2, 2);
  const Matrix rhs = rng.gaussian_matrix(3, 3);
  const Matrix k = seal::kron(lhs, rhs);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      REQUIRE(k(i, j) == lhs(i / 3, j / 3) * rhs(i % 3, j % 3));
}

TEST_CASE("hadamard identity and mismatch") {
  seal::SeededRng rng(8);
  const Matrix m = rng.gaussian_matrix(3, 4);
  REQUIRE(seal::max_abs_diff(seal::hadamard(m, Matrix::filled(3, 4, 1.0)), m) ==
          0.0);
  REQUIRE_THROWS_AS(seal::hadamard(m, Matrix(4, 3)), seal::ShapeError);
}

TEST_CASE("seeded rng streams are reproducible") {
  seal::SeededRng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) REQUIRE(a.normal() == b.normal());

  seal::SeededRng c(12345);
  const Matrix m1 = c.gaussian_matrix(4, 4);
  seal::SeededRng d(12345);
  const Matrix m2 = d.gaussian_matrix(4, 4);
  REQUIRE(seal::max_abs_diff(m1, m2) == 0.0);
}

TEST_CASE("gaussian sample std near nominal") {
  seal::SeededRng rng(99);
  const Matrix m = rng.gaussian_matrix(32, 32);
  double ss = 0.0;
  for (double v : m.data()) ss += v * v;
  const double sample_std = std::sqrt(ss / double(m.size()));
  REQUIRE(sample_std >= 0.85);
  REQUIRE(sample_std <= 1.15);
}

TEST_CASE("permutation covers every index") {
  seal::SeededRng rng(21);
  const auto p = rng.permutation(257);
  std::vector<bool> seen(257, false);
  for (std::size_t v : p) {
    REQUIRE(v < 257);
    REQUIRE(!seen[v]);
    seen[v] = true;
  }
}
