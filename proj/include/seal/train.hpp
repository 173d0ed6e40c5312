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

#ifndef SEAL_TRAIN_HPP
#define SEAL_TRAIN_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seal/adapter.hpp"
#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/operators.hpp"
#include "seal/passport.hpp"
#include "seal/rng.hpp"
#include "seal/task.hpp"
#include "seal/verify.hpp"

namespace seal {

/// How a passport is chosen for each mini batch.
enum class PolicyKind { alternate_random, alternate_even_odd, single, mapped };

struct PassportPolicy {
  PolicyKind kind = PolicyKind::alternate_random;
  // mapped only: total function from batch index to passport id.
  std::function<std::string(std::size_t)> map;

  static PassportPolicy alternate_random() { return {PolicyKind::alternate_random, {}}; }
  static PassportPolicy alternate_even_odd() { return {PolicyKind::alternate_even_odd, {}}; }
  static PassportPolicy single() { return {PolicyKind::single, {}}; }
  static PassportPolicy mapped(std::function<std::string(std::size_t)> f) {
    return {PolicyKind::mapped, std::move(f)};
  }
};

struct TrainConfig {
  std::uint64_t seed = 0;
  std::size_t b = 16, a = 16, r = 4;
  std::size_t n_train = 512, n_val = 256;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learning_rate = 5e-3;
  PassportPolicy passport_policy = PassportPolicy::alternate_random();
  OperatorKind op = OperatorKind::matmul;

  void validate() const {
    if (batch_size < 1 || batch_size > n_train)
      throw ValidationError("train: batch_size must be in [1, n_train]");
    if (!(learning_rate > 0.0))
      throw ValidationError("train: learning_rate must be > 0");
    if (epochs < 1) throw ValidationError("train: epochs must be >= 1");
    if (op != OperatorKind::matmul)
      throw ValidationError("train: only the matmul operator has a trainer");
  }
};

struct TrainReport {
  std::vector<double> loss_per_epoch;
  std::map<std::string, double> final_metric_per_passport;
  std::map<std::string, std::size_t> passport_usage_counts;
};

/// Closed-form gradients of the loss through the three-factor update:
/// gradA = (B C)^T G and gradB = G (C A)^T where G = dphi/dDelta.
inline std::pair<Matrix, Matrix> grad(const Matrix& b, const Matrix& a,
                                      const Matrix& c,
                                      const Matrix& dphi_ddelta) {
  if (dphi_ddelta.rows() != b.rows() || dphi_ddelta.cols() != a.cols())
    throw ShapeError("grad: dphi_ddelta must be b x a");
  Matrix grad_b = matmul(dphi_ddelta, transpose(matmul(c, a)));
  Matrix grad_a = matmul(transpose(matmul(b, c)), dphi_ddelta);
  return {std::move(grad_b), std::move(grad_a)};
}

/// Deterministic per-batch passport choice. alternate_random consumes one
/// uniform draw from the shared stream; the other policies consume none.
inline std::string map_passport(std::size_t batch_index,
                                const PassportPolicy& policy,
                                const PassportSet& set, SeededRng& rng) {
  switch (policy.kind) {
    case PolicyKind::single:
      return set.primary.id;
    case PolicyKind::alternate_even_odd:
      return batch_index % 2 == 0 ? set.primary.id : set.private_extra.id;
    case PolicyKind::alternate_random:
      return rng.uniform() < 0.5 ? set.primary.id : set.private_extra.id;
    case PolicyKind::mapped: {
      if (!policy.map) throw ValidationError("mapped policy needs a function");
      const std::string id = policy.map(batch_index);
      return set.by_id(id).id;  // throws on unknown ids
    }
  }
  throw ValidationError("unknown passport policy");
}

namespace detail {

inline Matrix gather_columns(const Matrix& m, const std::vector<std::size_t>& perm,
                             std::size_t first, std::size_t count) {
  Matrix out(m.rows(), count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t src = perm[first + j];
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, src);
  }
  return out;
}

// One gradient step on factors (b_up, a_down) for the batch, with the
// passport c inserted between them. Returns the batch MSE before the step.
inline double sgd_step(Matrix& b_up, Matrix& a_down, const Matrix& c,
                       const Matrix& w, const Matrix& xb, const Matrix& yb,
                       double lr) {
  const std::size_t m = xb.cols();
  const Matrix delta = seal_delta(b_up, c, a_down);
  const Matrix resid = sub(matmul(add(w, delta), xb), yb);
  double mse = 0.0;
  for (double v : resid.data()) mse += v * v;
  mse /= double(m);
  const Matrix g = scale(matmul(resid, transpose(xb)), 2.0 / double(m));
  auto [gb, ga] = grad(b_up, a_down, c, g);
  b_up = sub(b_up, scale(gb, lr));
  a_down = sub(a_down, scale(ga, lr));
  return mse;
}

}  // namespace detail

/// Entangled training: mini-batch gradient descent on MSE with one passport
/// from the set inserted per batch, chosen by the policy. B starts at zero
/// and A at N(0, 1/r) so the initial update is zero. The full passport set
/// stays private inside the returned adapter.
inline std::pair<SealedAdapter, TrainReport> train(const SyntheticTask& task,
                                                   const TrainConfig& cfg,
                                                   const PassportSet& passports) {
  cfg.validate();
  if (task.b() != cfg.b || task.a() != cfg.a)
    throw ShapeError("train: task dims do not match config");
  if (passports.primary.r() != cfg.r)
    throw ValidationError("train: passport r does not match config");

  SeededRng rng(cfg.seed);
  Matrix b_up = Matrix::zeros(cfg.b, cfg.r);
  Matrix a_down = rng.gaussian_matrix(cfg.r, cfg.a, 1.0 / std::sqrt(double(cfg.r)));

  TrainReport report;
  for (std::size_t i = 0; i < passports.count(); ++i)
    report.passport_usage_counts[passports.by_index(i).id] = 0;

  const std::size_t num_batches = cfg.n_train / cfg.batch_size;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<std::size_t> perm = rng.permutation(task.n_train());
    double epoch_loss = 0.0;
    for (std::size_t batch = 0; batch < num_batches; ++batch, ++step) {
      const std::string id = map_passport(batch, cfg.passport_policy, passports, rng);
      ++report.passport_usage_counts[id];
      const Matrix& c = passports.by_id(id).matrix;
      const Matrix xb = detail::gather_columns(task.train_inputs, perm,
                                               batch * cfg.batch_size, cfg.batch_size);
      const Matrix yb = detail::gather_columns(task.train_targets, perm,
                                               batch * cfg.batch_size, cfg.batch_size);
      const double mse = detail::sgd_step(b_up, a_down, c, task.base.w, xb, yb,
                                          cfg.learning_rate);
      if (!std::isfinite(mse) || !b_up.all_finite() || !a_down.all_finite())
        throw TrainingFailure("training diverged", step);
      epoch_loss += mse;
    }
    report.loss_per_epoch.push_back(epoch_loss / double(num_batches));
  }

  SealedAdapter adapter{std::move(b_up), std::move(a_down), passports,
                        cfg.op, 1.0};
  for (std::size_t i = 0; i < passports.count(); ++i) {
    const Passport& p = passports.by_index(i);
    report.final_metric_per_passport[p.id] =
        metric_rmse(task.base, adapter.b_up, adapter.a_down, p.matrix, task);
  }
  return {std::move(adapter), std::move(report)};
}

struct LoraResult {
  Matrix b_up;
  Matrix a_down;
  TrainReport report;
};

/// Plain low-rank baseline with the same initialization, batching, and RNG
/// consumption pattern as train() under the single-passport policy, so the
/// two trajectories are comparable step for step.
inline LoraResult train_lora(const SyntheticTask& task, const TrainConfig& cfg) {
  cfg.validate();
  if (task.b() != cfg.b || task.a() != cfg.a)
    throw ShapeError("train: task dims do not match config");

  SeededRng rng(cfg.seed);
  Matrix b_up = Matrix::zeros(cfg.b, cfg.r);
  Matrix a_down = rng.gaussian_matrix(cfg.r, cfg.a, 1.0 / std::sqrt(double(cfg.r)));
  const Matrix identity = Matrix::identity(cfg.r);

  LoraResult res;
  const std::size_t num_batches = cfg.n_train / cfg.batch_size;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<std::size_t> perm = rng.permutation(task.n_train());
    double epoch_loss = 0.0;
    for (std::size_t batch = 0; batch < num_batches; ++batch, ++step) {
      const Matrix xb = detail::gather_columns(task.train_inputs, perm,
                                               batch * cfg.batch_size, cfg.batch_size);
      const Matrix yb = detail::gather_columns(task.train_targets, perm,
                                               batch * cfg.batch_size, cfg.batch_size);
      const double mse = detail::sgd_step(b_up, a_down, identity, task.base.w,
                                          xb, yb, cfg.learning_rate);
      if (!std::isfinite(mse) || !b_up.all_finite() || !a_down.all_finite())
        throw TrainingFailure("training diverged", step);
      epoch_loss += mse;
    }
    res.report.loss_per_epoch.push_back(epoch_loss / double(num_batches));
  }
  res.report.final_metric_per_passport["lora"] =
      metric_rmse(task.base, b_up, a_down, identity, task);
  res.b_up = std::move(b_up);
  res.a_down = std::move(a_down);
  return res;
}

/// Learning-rate stabilization for entangled runs. The passport multiplies
/// the effective curvature by roughly its squared spectral norm, so rates
/// tuned for the plain baseline are rescaled by max(1, (sigma_max / 2)^2)
/// over the passports in the set.
inline double stabilized_lr(double base_lr, const PassportSet& passports) {
  double smax = 0.0;
  for (std::size_t i = 0; i < passports.count(); ++i) {
    const SvdResult d = svd(passports.by_index(i).matrix);
    if (!d.sigma.empty()) smax = std::max(smax, d.sigma.front());
  }
  const double factor = std::max(1.0, (smax / 2.0) * (smax / 2.0));
  return base_lr / factor;
}

}  // namespace seal

#endif  // SEAL_TRAIN_HPP
