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

#ifndef SEAL_MATRIX_HPP
#define SEAL_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

#include "seal/error.hpp"

namespace seal {

/// Dense row-major matrix of doubles. The substrate for all weights and
/// passports; immutable by convention once handed to another component.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw ValidationError("matrix dims must be positive");
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw ValidationError("matrix dims must be positive");
    if (data_.size() != rows * cols) throw ShapeError("data length != rows*cols");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    if (rows_ == 0) throw ValidationError("matrix dims must be positive");
    cols_ = init.begin()->size();
    if (cols_ == 0) throw ValidationError("matrix dims must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ShapeError("ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  static Matrix filled(std::size_t rows, std::size_t cols, double v) {
    Matrix m(rows, cols);
    for (auto& x : m.data_) x = v;
    return m;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows())
    throw ShapeError("matmul: lhs.cols != rhs.rows");
  Matrix out(lhs.rows(), rhs.cols());
  const std::size_t m = lhs.rows(), k = lhs.cols(), n = rhs.cols();
  // i-k-j order keeps the rhs row access contiguous.
  for (std::size_t i = 0; i < m; ++i) {
    double* oi = &out.data()[i * n];
    for (std::size_t p = 0; p < k; ++p) {
      const double lip = lhs(i, p);
      if (lip == 0.0) continue;
      const double* rp = &rhs.data()[p * n];
      for (std::size_t j = 0; j < n; ++j) oi[j] += lip * rp[j];
    }
  }
  return out;
}

inline Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("add: shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

inline Matrix sub(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("sub: shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

inline Matrix scale(const Matrix& a, double s) {
  Matrix out = a;
  for (auto& v : out.data()) v *= s;
  return out;
}

inline Matrix hadamard(const Matrix& lhs, const Matrix& rhs) {
  if (!lhs.same_shape(rhs)) throw ShapeError("hadamard: shape mismatch");
  Matrix out = lhs;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= rhs.data()[i];
  return out;
}

inline Matrix kron(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      const double lij = lhs(i, j);
      if (lij == 0.0) continue;
      for (std::size_t p = 0; p < rhs.rows(); ++p)
        for (std::size_t q = 0; q < rhs.cols(); ++q)
          out(i * rhs.rows() + p, j * rhs.cols() + q) = lij * rhs(p, q);
    }
  return out;
}

inline double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
  return s;
}

/// ||a - b||_F / ||b||_F, with the convention 0/0 = 0.
inline double rel_frobenius_diff(const Matrix& a, const Matrix& b) {
  const double denom = frobenius_norm(b);
  const double num = frobenius_norm(sub(a, b));
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace seal

#endif  // SEAL_MATRIX_HPP
