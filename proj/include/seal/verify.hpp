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

#ifndef SEAL_VERIFY_HPP
#define SEAL_VERIFY_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "seal/adapter.hpp"
#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/svd.hpp"
#include "seal/task.hpp"

namespace seal {

constexpr double kDefaultAlpha = 5e-4;
constexpr double kReconstructionTol = 1e-6;

/// Outcome of the sign-agreement hypothesis test on an extracted passport.
/// detect_score is log10(1/p_value); detected means p_value < alpha.
struct ExtractionResult {
  Matrix c_ext;
  std::size_t sign_matches = 0;
  std::size_t n_bits = 0;
  double p_value = 1.0;
  double log10_inv_p = 0.0;  // exact even when p_value underflows
  double detect_score = 0.0;
  bool detected = false;
};

/// Outcome of the fidelity-gap comparison between two claimed passports.
struct FidelityReport {
  double metric_a = 0.0;
  double metric_b = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  bool reconstruction_ok = false;
  bool verdict = false;
};

/// Recovers the hidden passport from released weights using the owner's
/// private factors: C_ext = pinv(B) (B' A') pinv(A). Both claimed factors
/// must be full rank for the pseudo-inverse identities to collapse.
inline Matrix extract(const PublicAdapter& pub, const Matrix& b,
                      const Matrix& a, double tol = -1.0) {
  const std::size_t r = b.cols();
  if (a.rows() != r) throw ShapeError("extract: b.cols != a.rows");
  if (numerical_rank(b) != r)
    throw AssumptionViolation("extract: claimed B is rank deficient");
  if (numerical_rank(a) != r)
    throw AssumptionViolation("extract: claimed A is rank deficient");
  const Matrix merged = matmul(pub.b_pub, pub.a_pub);
  return matmul(matmul(pinv(b, tol), merged), pinv(a, tol));
}

namespace detail {

// log(sum(exp(terms))) without overflow.
inline double logsumexp(const std::vector<double>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

// log P[X >= k] for X ~ Binomial(n, 1/2), exact summation in the log domain.
inline double log_binom_upper_tail_exact(std::size_t k, std::size_t n) {
  if (k == 0) return 0.0;
  const double log_half_n = -double(n) * std::log(2.0);
  std::vector<double> terms;
  terms.reserve(n - k + 1);
  const double lgn = std::lgamma(double(n) + 1.0);
  for (std::size_t i = k; i <= n; ++i) {
    const double lc =
        lgn - std::lgamma(double(i) + 1.0) - std::lgamma(double(n - i) + 1.0);
    terms.push_back(lc + log_half_n);
  }
  return std::min(0.0, logsumexp(terms));
}

// Normal upper-tail approximation with continuity correction, in log space.
// Used above the exact-summation cutoff where lgamma sums get expensive.
inline double log_binom_upper_tail_normal(std::size_t k, std::size_t n) {
  if (k == 0) return 0.0;
  const double mean = 0.5 * double(n);
  const double sd = 0.5 * std::sqrt(double(n));
  const double z = (double(k) - 0.5 - mean) / sd;
  if (z < 0.0)
    return std::log1p(-0.5 * std::erfc(z / std::sqrt(2.0)));
  // log(0.5 erfc(z/sqrt 2)); erfcx keeps precision for large z:
  // erfc(x) = erfcx(x) exp(-x^2) and log(erfcx) stays representable.
  const double x = z / std::sqrt(2.0);
  const double erfc_val = std::erfc(x);
  if (erfc_val > 0.0 && x < 20.0) return std::log(0.5 * erfc_val);
  // Asymptotic expansion log(erfc(x)) ~ -x^2 + log(1/(x sqrt(pi))) for large x.
  return -x * x - std::log(x) - 0.5 * std::log(M_PI) - std::log(2.0);
}

constexpr std::size_t kExactTailCutoff = 10000;

inline double log_binom_upper_tail(std::size_t k, std::size_t n) {
  return n <= kExactTailCutoff ? log_binom_upper_tail_exact(k, n)
                               : log_binom_upper_tail_normal(k, n);
}

}  // namespace detail

/// Sign-agreement detection over pre-aggregated counts. Used directly when
/// matches and bits have been summed across several adapted modules.
inline ExtractionResult detect_counts(std::size_t matches, std::size_t n_bits,
                                      double alpha = kDefaultAlpha) {
  if (n_bits == 0)
    throw DegenerateInputError("detect: no usable sign bits");
  if (matches > n_bits) throw ValidationError("detect: matches > n_bits");
  ExtractionResult res;
  res.sign_matches = matches;
  res.n_bits = n_bits;
  const double log_p = detail::log_binom_upper_tail(matches, n_bits);
  res.log10_inv_p = -log_p / std::log(10.0);
  res.detect_score = res.log10_inv_p;
  res.p_value = std::exp(log_p);
  if (res.p_value == 0.0) res.p_value = std::numeric_limits<double>::denorm_min();
  res.detected = log_p < std::log(alpha);
  return res;
}

/// Counts entries whose signs agree between the extracted and true passport.
/// Entries where c_true is exactly zero carry no sign and are excluded.
inline void count_sign_matches(const Matrix& c_ext, const Matrix& c_true,
                               std::size_t& matches, std::size_t& n_bits) {
  if (!c_ext.same_shape(c_true)) throw ShapeError("detect: shape mismatch");
  if (!c_ext.all_finite() || !c_true.all_finite())
    throw ValidationError("detect: non-finite entries");
  for (std::size_t i = 0; i < c_ext.size(); ++i) {
    const double t = c_true.data()[i];
    if (t == 0.0) continue;
    ++n_bits;
    const double e = c_ext.data()[i];
    if ((t > 0.0 && e > 0.0) || (t < 0.0 && e < 0.0)) ++matches;
  }
}

inline ExtractionResult detect(const Matrix& c_ext, const Matrix& c_true,
                               double alpha = kDefaultAlpha) {
  std::size_t matches = 0, n_bits = 0;
  count_sign_matches(c_ext, c_true, matches, n_bits);
  ExtractionResult res = detect_counts(matches, n_bits, alpha);
  res.c_ext = c_ext;
  return res;
}

/// Aggregate detection across several modules: matches and bits are summed
/// before the single p-value is formed.
inline ExtractionResult detect_modules(const std::vector<Matrix>& c_exts,
                                       const Matrix& c_true,
                                       double alpha = kDefaultAlpha) {
  std::size_t matches = 0, n_bits = 0;
  for (const auto& c_ext : c_exts)
    count_sign_matches(c_ext, c_true, matches, n_bits);
  return detect_counts(matches, n_bits, alpha);
}

/// Validation RMSE of (W + B C_t A) x against the task targets, averaged over
/// every entry of every validation sample.
inline double metric_rmse(const BaseWeights& base, const Matrix& b,
                          const Matrix& a, const Matrix& c_t,
                          const SyntheticTask& task,
                          double alpha_over_r = 1.0) {
  const Matrix delta = scale(seal_delta(b, c_t, a), alpha_over_r);
  const Matrix pred = matmul(add(base.w, delta), task.val_inputs);
  const Matrix resid = sub(pred, task.val_targets);
  double s = 0.0;
  for (double v : resid.data()) s += v * v;
  return std::sqrt(s / double(resid.size()));
}

/// RMSE of a released pair evaluated as-is (no passport inserted).
inline double metric_rmse_public(const BaseWeights& base,
                                 const PublicAdapter& pub,
                                 const SyntheticTask& task) {
  const Matrix pred = matmul(add(base.w, pub.delta()), task.val_inputs);
  const Matrix resid = sub(pred, task.val_targets);
  double s = 0.0;
  for (double v : resid.data()) s += v * v;
  return std::sqrt(s / double(resid.size()));
}

/// Fidelity-gap verification: the claimant's (B, A, C_a) must reconstruct the
/// released product, and the task metrics under the two claimed passports
/// must agree within epsilon.
inline FidelityReport verify_fidelity(const PublicAdapter& pub,
                                      const Matrix& b, const Matrix& a,
                                      const Matrix& c_a, const Matrix& c_b,
                                      const SyntheticTask& task,
                                      double epsilon) {
  if (epsilon < 0.0) throw ValidationError("verify: epsilon must be >= 0");
  FidelityReport rep;
  rep.epsilon = epsilon;
  const Matrix merged = matmul(pub.b_pub, pub.a_pub);
  const Matrix claimed = seal_delta(b, c_a, a);
  rep.reconstruction_ok =
      rel_frobenius_diff(claimed, merged) <= kReconstructionTol;
  rep.metric_a = metric_rmse(task.base, b, a, c_a, task, pub.alpha_over_r);
  rep.metric_b = metric_rmse(task.base, b, a, c_b, task, pub.alpha_over_r);
  rep.delta = std::abs(rep.metric_a - rep.metric_b);
  rep.verdict = rep.reconstruction_ok && rep.delta <= rep.epsilon;
  return rep;
}

}  // namespace seal

#endif  // SEAL_VERIFY_HPP
