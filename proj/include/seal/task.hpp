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

#ifndef SEAL_TASK_HPP
#define SEAL_TASK_HPP

#include <cmath>
#include <cstdint>

#include "seal/adapter.hpp"
#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

/// Teacher-student regression surrogate for a host task. Inputs are stored
/// column-wise (one column per sample); targets are (W + teacher_delta) x,
/// optionally perturbed by gaussian observation noise. Fully determined by
/// (seed, dims, noise_std): regenerating reproduces every field bit-exactly.
struct SyntheticTask {
  BaseWeights base;
  Matrix teacher_delta;     // b x a, rank at most q
  Matrix train_inputs;      // a x n_train
  Matrix train_targets;     // b x n_train
  Matrix val_inputs;        // a x n_val
  Matrix val_targets;       // b x n_val
  std::uint64_t seed = 0;
  std::size_t q = 0;
  double noise_std = 0.0;

  std::size_t b() const { return base.w.rows(); }
  std::size_t a() const { return base.w.cols(); }
  std::size_t n_train() const { return train_inputs.cols(); }
  std::size_t n_val() const { return val_inputs.cols(); }
};

inline SyntheticTask make_task(std::uint64_t seed, std::size_t b, std::size_t a,
                               std::size_t r, std::size_t q,
                               std::size_t n_train, std::size_t n_val,
                               double noise_std = 0.0) {
  if (b < 1 || a < 1 || r < 1) throw ValidationError("task dims must be >= 1");
  if (q > r) throw ValidationError("teacher rank q must not exceed r");
  if (n_train < 1 || n_val < 1) throw ValidationError("task needs samples");
  if (noise_std < 0.0) throw ValidationError("noise_std must be >= 0");

  SeededRng rng(seed);
  SyntheticTask task;
  task.seed = seed;
  task.q = q;
  task.noise_std = noise_std;

  task.base.w = rng.gaussian_matrix(b, a, 1.0 / std::sqrt(double(a)));

  if (q == 0) {
    task.teacher_delta = Matrix::zeros(b, a);
  } else {
    const Matrix u = rng.gaussian_matrix(b, q);
    const Matrix v = rng.gaussian_matrix(q, a);
    task.teacher_delta = scale(matmul(u, v), 1.0 / std::sqrt(double(q)));
  }

  const Matrix w_eff = add(task.base.w, task.teacher_delta);
  task.train_inputs = rng.gaussian_matrix(a, n_train);
  task.train_targets = matmul(w_eff, task.train_inputs);
  if (noise_std > 0.0)
    task.train_targets =
        add(task.train_targets, rng.gaussian_matrix(b, n_train, noise_std));
  task.val_inputs = rng.gaussian_matrix(a, n_val);
  task.val_targets = matmul(w_eff, task.val_inputs);
  if (noise_std > 0.0)
    task.val_targets =
        add(task.val_targets, rng.gaussian_matrix(b, n_val, noise_std));
  return task;
}

}  // namespace seal

#endif  // SEAL_TASK_HPP
