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

#ifndef SEAL_PASSPORT_HPP
#define SEAL_PASSPORT_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/operators.hpp"
#include "seal/rng.hpp"
#include "seal/svd.hpp"

namespace seal {

struct Provenance {
  enum class Kind { gaussian, image, explicit_ } kind = Kind::explicit_;
  std::uint64_t seed = 0;       // gaussian
  double std = 0.0;             // gaussian
  std::string source_digest;    // image
  std::size_t width = 0;        // image
  std::size_t height = 0;       // image
};

/// A non-trainable square secret matrix with provenance. Immutable after
/// creation. Kronecker-built passports keep their generation-time factors so
/// the kronecker decomposition stays well posed.
struct Passport {
  std::string id;
  Matrix matrix;
  Provenance provenance;
  std::optional<std::pair<Matrix, Matrix>> kron_factors;

  std::size_t r() const { return matrix.rows(); }
};

/// The passports a sealed adapter is trained against. primary is the one
/// hidden inside the public weights; private_extra is never distributed.
struct PassportSet {
  Passport primary;
  Passport private_extra;
  std::vector<Passport> extras;

  PassportSet(Passport primary_in, Passport private_in,
              std::vector<Passport> extras_in = {})
      : primary(std::move(primary_in)),
        private_extra(std::move(private_in)),
        extras(std::move(extras_in)) {
    const std::size_t r = primary.r();
    if (private_extra.r() != r)
      throw ValidationError("passport set: mismatched r");
    if (primary.id == private_extra.id)
      throw ValidationError("passport set: duplicate id " + primary.id);
    std::vector<std::string> ids = {primary.id, private_extra.id};
    for (const auto& p : extras) {
      if (p.r() != r) throw ValidationError("passport set: mismatched r");
      for (const auto& seen : ids)
        if (seen == p.id)
          throw ValidationError("passport set: duplicate id " + p.id);
      ids.push_back(p.id);
    }
  }

  std::size_t count() const { return 2 + extras.size(); }

  const Passport& by_index(std::size_t i) const {
    if (i == 0) return primary;
    if (i == 1) return private_extra;
    if (i - 2 < extras.size()) return extras[i - 2];
    throw ValidationError("passport index out of range");
  }

  const Passport& by_id(const std::string& id) const {
    for (std::size_t i = 0; i < count(); ++i)
      if (by_index(i).id == id) return by_index(i);
    throw ValidationError("unknown passport id: " + id);
  }
};

/// A camouflage split of a passport: c1 (op) c2 reconstructs the source.
struct DecompositionPair {
  Matrix c1;
  Matrix c2;
  OperatorKind op;
};

inline Passport gen_gaussian(std::uint64_t seed, std::size_t r, double std,
                             std::string id = "C") {
  if (r < 1) throw ValidationError("passport r must be >= 1");
  if (!(std > 0.0)) throw ValidationError("passport std must be > 0");
  SeededRng rng(seed);
  Matrix m = rng.gaussian_matrix(r, r, std);
  // Full rank is required for hiding and extraction. The singular failure
  // set has measure zero; redrawing from the same stream keeps the result a
  // pure function of (seed, r, std).
  while (numerical_rank(m) != r) m = rng.gaussian_matrix(r, r, std);
  Passport p;
  p.id = std::move(id);
  p.matrix = std::move(m);
  p.provenance = {Provenance::Kind::gaussian, seed, std, "", 0, 0};
  return p;
}

/// Gaussian passport assembled as kron(f1, f2) with the factors retained.
/// f1 is r1 x r1 and f2 is r2 x r2, so the passport is (r1*r2) x (r1*r2).
inline Passport gen_gaussian_kron(std::uint64_t seed, std::size_t r1,
                                  std::size_t r2, double std,
                                  std::string id = "C") {
  if (r1 < 1 || r2 < 1) throw ValidationError("kron factor dims must be >= 1");
  if (!(std > 0.0)) throw ValidationError("passport std must be > 0");
  SeededRng rng(seed);
  const double fstd = std::sqrt(std);
  Matrix f1 = rng.gaussian_matrix(r1, r1, fstd);
  Matrix f2 = rng.gaussian_matrix(r2, r2, fstd);
  while (numerical_rank(f1) != r1) f1 = rng.gaussian_matrix(r1, r1, fstd);
  while (numerical_rank(f2) != r2) f2 = rng.gaussian_matrix(r2, r2, fstd);
  Passport p;
  p.id = std::move(id);
  p.matrix = kron(f1, f2);
  p.provenance = {Provenance::Kind::gaussian, seed, std, "", 0, 0};
  p.kron_factors = std::make_pair(std::move(f1), std::move(f2));
  return p;
}

inline Passport make_explicit(Matrix m, std::string id = "C") {
  if (m.rows() != m.cols()) throw ValidationError("passport must be square");
  Passport p;
  p.id = std::move(id);
  p.matrix = std::move(m);
  p.provenance.kind = Provenance::Kind::explicit_;
  return p;
}

namespace detail {

inline std::string fnv1a_digest(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace detail

/// Builds an r x r passport from 8-bit grayscale pixels: center-crop to the
/// largest square, area-average down to r x r, then standardize to zero mean
/// and unit variance over the r*r entries.
inline Passport gen_from_image(const std::vector<std::uint8_t>& gray_pixels,
                               std::size_t width, std::size_t height,
                               std::size_t r, std::string id = "C") {
  if (r < 1) throw ValidationError("passport r must be >= 1");
  if (width < r || height < r)
    throw ValidationError("image smaller than requested passport size");
  if (gray_pixels.size() != width * height)
    throw ShapeError("pixel buffer length != width*height");

  const std::size_t side = std::min(width, height);
  const std::size_t x0 = (width - side) / 2;
  const std::size_t y0 = (height - side) / 2;

  Matrix m(r, r);
  const double cell = static_cast<double>(side) / static_cast<double>(r);
  for (std::size_t oi = 0; oi < r; ++oi) {
    const double top = oi * cell, bottom = (oi + 1) * cell;
    for (std::size_t oj = 0; oj < r; ++oj) {
      const double left = oj * cell, right = (oj + 1) * cell;
      double acc = 0.0;
      for (std::size_t pi = static_cast<std::size_t>(top);
           pi < side && pi < bottom; ++pi) {
        const double hy = std::min(bottom, pi + 1.0) - std::max(top, double(pi));
        for (std::size_t pj = static_cast<std::size_t>(left);
             pj < side && pj < right; ++pj) {
          const double hx =
              std::min(right, pj + 1.0) - std::max(left, double(pj));
          acc += hy * hx * gray_pixels[(y0 + pi) * width + (x0 + pj)];
        }
      }
      m(oi, oj) = acc / (cell * cell);
    }
  }

  const double n = static_cast<double>(r * r);
  double mean = 0.0;
  for (double v : m.data()) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : m.data()) var += (v - mean) * (v - mean);
  var /= n;
  if (var == 0.0)
    throw DegenerateInputError("constant image cannot seed a passport");
  const double inv_std = 1.0 / std::sqrt(var);
  for (double& v : m.data()) v = (v - mean) * inv_std;

  Passport p;
  p.id = std::move(id);
  p.matrix = std::move(m);
  p.provenance = {Provenance::Kind::image, 0, 0.0,
                  detail::fnv1a_digest(gray_pixels), width, height};
  return p;
}

inline DecompositionPair decompose(const Passport& c, OperatorKind op) {
  switch (op) {
    case OperatorKind::matmul: {
      const SvdResult d = svd(c.matrix);
      Matrix c1 = d.u;
      Matrix c2 = d.vt;
      for (std::size_t j = 0; j < d.sigma.size(); ++j) {
        const double root = std::sqrt(d.sigma[j]);
        for (std::size_t i = 0; i < c1.rows(); ++i) c1(i, j) *= root;
        for (std::size_t i = 0; i < c2.cols(); ++i) c2(j, i) *= root;
      }
      return {std::move(c1), std::move(c2), op};
    }
    case OperatorKind::hadamard: {
      Matrix c1 = c.matrix, c2 = c.matrix;
      for (std::size_t i = 0; i < c1.size(); ++i) {
        const double v = c.matrix.data()[i];
        const double root = std::sqrt(std::abs(v));
        c1.data()[i] = v < 0.0 ? -root : root;
        c2.data()[i] = root;
      }
      return {std::move(c1), std::move(c2), op};
    }
    case OperatorKind::kronecker: {
      if (!c.kron_factors)
        throw UnsupportedDecomposition(
            "kronecker decomposition needs generation-time factors");
      return {c.kron_factors->first, c.kron_factors->second, op};
    }
  }
  throw ValidationError("unknown operator");
}

inline Matrix interpolate(const Matrix& c_p, const Matrix& forged,
                          double gamma) {
  if (!c_p.same_shape(forged)) throw ShapeError("interpolate: shape mismatch");
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("interpolate: gamma outside [0,1]");
  Matrix out = c_p;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = (1.0 - gamma) * c_p.data()[i] + gamma * forged.data()[i];
  return out;
}

inline Matrix interpolate(const Passport& c_p, const Passport& forged,
                          double gamma) {
  return interpolate(c_p.matrix, forged.matrix, gamma);
}

}  // namespace seal

#endif  // SEAL_PASSPORT_HPP
