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
#include <cstdint>

#include "seal/matrix.hpp"
#include "seal/passport.hpp"
#include "seal/svd.hpp"
#include "seal/task.hpp"
#include "seal/train.hpp"
#include "seal/verify.hpp"

using seal::Matrix;

namespace {

seal::PassportSet reference_passports(std::uint64_t seed) {
  return seal::PassportSet(seal::gen_gaussian(seed, 4, 1.0, "C"),
                           seal::gen_gaussian(seed + 1, 4, 1.0, "C_p"));
}

// Scalar training loss for the finite-difference oracle.
double loss_value(const Matrix& b, const Matrix& c, const Matrix& a,
                  const Matrix& xb, const Matrix& yb) {
  const Matrix resid = seal::sub(seal::matmul(seal::seal_delta(b, c, a), xb), yb);
  double s = 0.0;
  for (double v : resid.data()) s += v * v;
  return s / double(xb.cols());
}

}  // namespace

TEST_CASE("make_task with q=0 has a zero teacher and zero floor") {
  const seal::SyntheticTask task = seal::make_task(1, 8, 8, 4, 0, 64, 32);
  REQUIRE(seal::max_abs(task.teacher_delta) == 0.0);
  const double rmse = seal::metric_rmse(task.base, Matrix::zeros(8, 4),
                                        Matrix::zeros(4, 8),
                                        Matrix::identity(4), task);
  REQUIRE(rmse == 0.0);
}

TEST_CASE("make_task is bit-deterministic") {
  const seal::SyntheticTask t1 = seal::make_task(5, 16, 16, 4, 2, 64, 32, 0.1);
  const seal::SyntheticTask t2 = seal::make_task(5, 16, 16, 4, 2, 64, 32, 0.1);
  REQUIRE(seal::max_abs_diff(t1.base.w, t2.base.w) == 0.0);
  REQUIRE(seal::max_abs_diff(t1.teacher_delta, t2.teacher_delta) == 0.0);
  REQUIRE(seal::max_abs_diff(t1.train_targets, t2.train_targets) == 0.0);
  REQUIRE(seal::max_abs_diff(t1.val_targets, t2.val_targets) == 0.0);
}

TEST_CASE("make_task validates parameters") {
  REQUIRE_THROWS_AS(seal::make_task(1, 8, 8, 4, 5, 64, 32),
                    seal::ValidationError);
  REQUIRE_THROWS_AS(seal::make_task(1, 8, 8, 4, 2, 64, 32, -0.5),
                    seal::ValidationError);
}

TEST_CASE("rank-q teacher admits an exact rank-r fit") {
  // The teacher itself factors through rank q <= r, so splitting its SVD
  // into adapter factors drives the noiseless validation RMSE to zero.
  const seal::SyntheticTask task = seal::make_task(9, 16, 16, 4, 4, 512, 256);
  const seal::SvdResult d = seal::svd(task.teacher_delta);
  Matrix b(16, 4), a(4, 16);
  for (std::size_t j = 0; j < 4; ++j) {
    const double root = std::sqrt(d.sigma[j]);
    for (std::size_t i = 0; i < 16; ++i) {
      b(i, j) = d.u(i, j) * root;
      a(j, i) = d.vt(j, i) * root;
    }
  }
  REQUIRE(seal::metric_rmse(task.base, b, a, Matrix::identity(4), task) <= 1e-6);
}

TEST_CASE("grad reduces to plain low-rank gradients under C = I") {
  seal::SeededRng rng(3);
  const Matrix b = rng.gaussian_matrix(8, 4);
  const Matrix a = rng.gaussian_matrix(4, 8);
  const Matrix g = rng.gaussian_matrix(8, 8);
  const auto [gb, ga] = seal::grad(b, a, Matrix::identity(4), g);
  REQUIRE(seal::max_abs_diff(gb, seal::matmul(g, seal::transpose(a))) == 0.0);
  REQUIRE(seal::max_abs_diff(ga, seal::matmul(seal::transpose(b), g)) == 0.0);
}

TEST_CASE("grad is zero for zero upstream gradient") {
  seal::SeededRng rng(4);
  const auto [gb, ga] =
      seal::grad(rng.gaussian_matrix(8, 4), rng.gaussian_matrix(4, 8),
                 rng.gaussian_matrix(4, 4), Matrix::zeros(8, 8));
  REQUIRE(seal::max_abs(gb) == 0.0);
  REQUIRE(seal::max_abs(ga) == 0.0);
}

TEST_CASE("grad matches central finite differences on 20 seeds") {
  const double step = 1e-5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    seal::SeededRng rng(seed);
    Matrix b = rng.gaussian_matrix(8, 4);
    Matrix a = rng.gaussian_matrix(4, 8);
    const Matrix c = rng.gaussian_matrix(4, 4);
    const Matrix xb = rng.gaussian_matrix(8, 16);
    const Matrix yb = rng.gaussian_matrix(8, 16);

    const Matrix resid =
        seal::sub(seal::matmul(seal::seal_delta(b, c, a), xb), yb);
    const Matrix g =
        seal::scale(seal::matmul(resid, seal::transpose(xb)), 2.0 / 16.0);
    const auto [gb, ga] = seal::grad(b, a, c, g);

    for (std::size_t idx = 0; idx < b.size(); idx += 5) {
      const double save = b.data()[idx];
      b.data()[idx] = save + step;
      const double up = loss_value(b, c, a, xb, yb);
      b.data()[idx] = save - step;
      const double down = loss_value(b, c, a, xb, yb);
      b.data()[idx] = save;
      const double fd = (up - down) / (2.0 * step);
      if (std::abs(gb.data()[idx]) > 1e-8)
        REQUIRE(std::abs(fd - gb.data()[idx]) / std::abs(gb.data()[idx]) <= 1e-5);
    }
    for (std::size_t idx = 0; idx < a.size(); idx += 5) {
      const double save = a.data()[idx];
      a.data()[idx] = save + step;
      const double up = loss_value(b, c, a, xb, yb);
      a.data()[idx] = save - step;
      const double down = loss_value(b, c, a, xb, yb);
      a.data()[idx] = save;
      const double fd = (up - down) / (2.0 * step);
      if (std::abs(ga.data()[idx]) > 1e-8)
        REQUIRE(std::abs(fd - ga.data()[idx]) / std::abs(ga.data()[idx]) <= 1e-5);
    }
  }
}

TEST_CASE("map_passport even-odd alternation") {
  const seal::PassportSet set = reference_passports(11);
  seal::SeededRng rng(0);
  const auto policy = seal::PassportPolicy::alternate_even_odd();
  REQUIRE(seal::map_passport(0, policy, set, rng) == "C");
  REQUIRE(seal::map_passport(1, policy, set, rng) == "C_p");
  REQUIRE(seal::map_passport(2, policy, set, rng) == "C");
}

TEST_CASE("map_passport round-robin over extras") {
  seal::Passport c = seal::gen_gaussian(1, 4, 1.0, "C0");
  seal::Passport cp = seal::gen_gaussian(2, 4, 1.0, "C1");
  seal::Passport c2 = seal::gen_gaussian(3, 4, 1.0, "C2");
  const seal::PassportSet set(c, cp, {c2});
  seal::SeededRng rng(0);
  const auto policy = seal::PassportPolicy::mapped(
      [](std::size_t i) { return "C" + std::to_string(i % 3); });
  for (std::size_t i = 0; i < 9; ++i)
    REQUIRE(seal::map_passport(i, policy, set, rng) ==
            "C" + std::to_string(i % 3));
}

TEST_CASE("map_passport rejects unknown mapped ids") {
  const seal::PassportSet set = reference_passports(13);
  seal::SeededRng rng(0);
  const auto policy =
      seal::PassportPolicy::mapped([](std::size_t) { return "missing"; });
  REQUIRE_THROWS_AS(seal::map_passport(0, policy, set, rng),
                    seal::ValidationError);
}

TEST_CASE("map_passport random alternation is near-balanced") {
  const seal::PassportSet set = reference_passports(17);
  seal::SeededRng rng(123);
  const auto policy = seal::PassportPolicy::alternate_random();
  std::size_t primary = 0;
  for (std::size_t i = 0; i < 1000; ++i)
    if (seal::map_passport(i, policy, set, rng) == "C") ++primary;
  REQUIRE(primary >= 450);
  REQUIRE(primary <= 550);
}

TEST_CASE("training usage counts are reproducible and sum to batch count") {
  const seal::SyntheticTask task = seal::make_task(19, 16, 16, 4, 2, 128, 64, 0.1);
  seal::TrainConfig cfg;
  cfg.seed = 23;
  cfg.n_train = 128;
  cfg.n_val = 64;
  cfg.epochs = 10;
  const seal::PassportSet set = reference_passports(29);

  const auto [adapter1, rep1] = seal::train(task, cfg, set);
  const auto [adapter2, rep2] = seal::train(task, cfg, set);
  REQUIRE(rep1.passport_usage_counts == rep2.passport_usage_counts);
  REQUIRE(seal::max_abs_diff(adapter1.b_up, adapter2.b_up) == 0.0);

  std::size_t total = 0;
  for (const auto& [id, count] : rep1.passport_usage_counts) total += count;
  REQUIRE(total == cfg.epochs * (cfg.n_train / cfg.batch_size));
}

TEST_CASE("training divergence raises a training failure") {
  const seal::SyntheticTask task = seal::make_task(31, 16, 16, 4, 2, 128, 64, 0.1);
  seal::TrainConfig cfg;
  cfg.seed = 1;
  cfg.n_train = 128;
  cfg.n_val = 64;
  cfg.epochs = 50;
  cfg.learning_rate = 10.0;
  REQUIRE_THROWS_AS(seal::train(task, cfg, reference_passports(37)),
                    seal::TrainingFailure);
}

TEST_CASE("full-batch descent is nonincreasing over the first 50 steps") {
  const seal::SyntheticTask task = seal::make_task(41, 16, 16, 4, 4, 128, 64);
  seal::TrainConfig cfg;
  cfg.seed = 2;
  cfg.n_train = 128;
  cfg.n_val = 64;
  cfg.batch_size = 128;  // full batch, one step per epoch
  cfg.epochs = 50;
  cfg.learning_rate = 1e-3;
  cfg.passport_policy = seal::PassportPolicy::single();
  const auto [adapter, report] = seal::train(task, cfg, reference_passports(43));
  for (std::size_t i = 0; i + 1 < report.loss_per_epoch.size(); ++i)
    REQUIRE(report.loss_per_epoch[i + 1] <= report.loss_per_epoch[i] + 1e-12);
}

TEST_CASE("identity passport reproduces the plain trajectory bit for bit") {
  const seal::SyntheticTask task = seal::make_task(47, 16, 16, 4, 2, 128, 64, 0.1);
  seal::TrainConfig cfg;
  cfg.seed = 3;
  cfg.n_train = 128;
  cfg.n_val = 64;
  cfg.epochs = 30;
  cfg.passport_policy = seal::PassportPolicy::single();

  seal::PassportSet set(seal::make_explicit(Matrix::identity(4), "C"),
                        seal::gen_gaussian(53, 4, 1.0, "C_p"));
  const auto [adapter, seal_report] = seal::train(task, cfg, set);
  const seal::LoraResult lora = seal::train_lora(task, cfg);

  REQUIRE(seal::max_abs_diff(adapter.b_up, lora.b_up) <= 1e-12);
  REQUIRE(seal::max_abs_diff(adapter.a_down, lora.a_down) <= 1e-12);
  for (std::size_t i = 0; i < seal_report.loss_per_epoch.size(); ++i)
    REQUIRE(seal_report.loss_per_epoch[i] == lora.report.loss_per_epoch[i]);
}

TEST_CASE("entangled adapters reject fresh passports") {
  const seal::SyntheticTask task = seal::make_task(59, 16, 16, 4, 2, 512, 256, 0.1);
  const seal::PassportSet set = reference_passports(61);
  seal::TrainConfig cfg;
  cfg.seed = 4;
  cfg.epochs = 400;
  cfg.learning_rate = seal::stabilized_lr(5e-3, set);
  const auto [adapter, report] = seal::train(task, cfg, set);

  const double rmse_c = report.final_metric_per_passport.at("C");
  const seal::Passport fresh = seal::gen_gaussian(67, 4, 1.0, "fresh");
  const double rmse_fresh =
      seal::metric_rmse(task.base, adapter.b_up, adapter.a_down, fresh.matrix, task);
  REQUIRE(rmse_fresh >= 5.0 * rmse_c);
}

TEST_CASE("stabilized learning rate shrinks with large passports") {
  const seal::PassportSet unit = reference_passports(71);
  const double lr_unit = seal::stabilized_lr(5e-3, unit);
  REQUIRE(lr_unit <= 5e-3);
  REQUIRE(lr_unit > 0.0);

  seal::PassportSet big(seal::gen_gaussian(73, 4, 100.0, "C"),
                        seal::gen_gaussian(74, 4, 100.0, "C_p"));
  REQUIRE(seal::stabilized_lr(5e-3, big) < lr_unit / 100.0);
}
