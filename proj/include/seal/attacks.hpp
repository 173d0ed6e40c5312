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

#ifndef SEAL_ATTACKS_HPP
#define SEAL_ATTACKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "seal/adapter.hpp"
#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/passport.hpp"
#include "seal/task.hpp"
#include "seal/train.hpp"
#include "seal/verify.hpp"

namespace seal {

struct AttackSpec {
  enum class Kind { prune, obfuscate, ambiguity, finetune } kind;
  std::uint64_t seed = 0;

  // prune: zeroing ratios to sweep, each in [0, 1].
  std::vector<double> ratios;
  // obfuscate: target ranks to sweep.
  std::vector<std::size_t> ranks;
  // ambiguity: interpolation weights in [0, 1] and the forger's seed.
  std::vector<double> gammas;
  std::uint64_t forge_seed = 0;
  // finetune: resumed-training budget; same_task false draws a fresh
  // teacher from task_seed with the original dimensions.
  std::size_t epochs = 0;
  std::uint64_t task_seed = 0;
  bool same_task = true;
  double learning_rate = 5e-3;
  std::size_t batch_size = 32;

  void validate() const {
    for (double v : ratios)
      if (v < 0.0 || v > 1.0) throw ValidationError("prune ratio outside [0,1]");
    for (double g : gammas)
      if (g < 0.0 || g > 1.0) throw ValidationError("gamma outside [0,1]");
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::prune: return "prune";
      case Kind::obfuscate: return "obfuscate";
      case Kind::ambiguity: return "ambiguity";
      case Kind::finetune: return "finetune";
    }
    return "unknown";
  }
};

struct AttackPoint {
  double strength = 0.0;
  double task_metric = 0.0;
  double detect_score = 0.0;
  double p_value = 1.0;
};

struct AttackReport {
  AttackSpec attack;
  std::vector<AttackPoint> points;
  std::string error;  // empty unless this attack failed inside a suite run
};

/// Magnitude pruning over the released pair: the entries of B' and A' are
/// pooled, ranked by absolute value, and the smallest ceil(ratio * n) are
/// zeroed. Ties break toward the lower flat index (B' entries first).
inline PublicAdapter prune(const PublicAdapter& pub, double ratio) {
  if (ratio < 0.0 || ratio > 1.0)
    throw ValidationError("prune: ratio outside [0,1]");
  const std::size_t nb = pub.b_pub.size();
  const std::size_t n = nb + pub.a_pub.size();
  const std::size_t k = static_cast<std::size_t>(std::ceil(ratio * double(n)));

  PublicAdapter out = pub;
  if (k == 0) return out;
  auto value_at = [&](std::size_t i) {
    return i < nb ? pub.b_pub.data()[i] : pub.a_pub.data()[i - nb];
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(value_at(x)) < std::abs(value_at(y));
  });
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = order[i];
    if (idx < nb)
      out.b_pub.data()[idx] = 0.0;
    else
      out.a_pub.data()[idx - nb] = 0.0;
  }
  return out;
}

/// Resumed plain low-rank training on the released pair, no passport
/// inserted. Zero epochs returns the input unchanged.
inline PublicAdapter finetune_attack(const PublicAdapter& pub,
                                     const SyntheticTask& task,
                                     std::size_t epochs,
                                     double learning_rate = 5e-3,
                                     std::size_t batch_size = 32,
                                     std::uint64_t seed = 0) {
  if (pub.op != OperatorKind::matmul)
    throw ValidationError("finetune_attack supports the matmul operator only");
  if (batch_size < 1 || batch_size > task.n_train())
    throw ValidationError("finetune_attack: bad batch size");
  PublicAdapter out = pub;
  if (epochs == 0) return out;

  SeededRng rng(seed);
  const Matrix identity = Matrix::identity(pub.b_pub.cols());
  const std::size_t num_batches = task.n_train() / batch_size;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const std::vector<std::size_t> perm = rng.permutation(task.n_train());
    for (std::size_t batch = 0; batch < num_batches; ++batch, ++step) {
      const Matrix xb = detail::gather_columns(task.train_inputs, perm,
                                               batch * batch_size, batch_size);
      const Matrix yb = detail::gather_columns(task.train_targets, perm,
                                               batch * batch_size, batch_size);
      const double mse = detail::sgd_step(out.b_pub, out.a_pub, identity,
                                          task.base.w, xb, yb, learning_rate);
      if (!std::isfinite(mse) || !out.b_pub.all_finite() || !out.a_pub.all_finite())
        throw TrainingFailure("finetune attack diverged", step);
    }
  }
  return out;
}

/// Rank restructuring via truncated SVD of the released product.
inline PublicAdapter obfuscate_attack(const PublicAdapter& pub, std::size_t k) {
  return obfuscate_rank(pub, k);
}

namespace detail {

inline double passport_std(const Passport& p) {
  return p.provenance.kind == Provenance::Kind::gaussian ? p.provenance.std : 1.0;
}

inline AttackPoint detection_point(const SealedAdapter& owner,
                                   const PublicAdapter& attacked,
                                   const SyntheticTask& task, double strength) {
  AttackPoint pt;
  pt.strength = strength;
  pt.task_metric = metric_rmse_public(task.base, attacked, task);
  const Matrix c_ext = extract(attacked, owner.b_up, owner.a_down);
  const ExtractionResult det = detect(c_ext, owner.passports.primary.matrix);
  pt.detect_score = det.detect_score;
  pt.p_value = det.p_value;
  return pt;
}

}  // namespace detail

/// Fidelity sweep of counterfeit passports C_t = (1 - gamma) C_p + gamma F
/// with F a fresh gaussian forge at the genuine passport's std. The detect
/// columns report how much C_t still sign-matches the private passport.
inline AttackReport ambiguity_sweep(const SealedAdapter& adapter,
                                    const SyntheticTask& task,
                                    const std::vector<double>& gammas,
                                    std::uint64_t forge_seed) {
  const Passport& c_p = adapter.passports.private_extra;
  const Passport forged = gen_gaussian(forge_seed, c_p.r(),
                                       detail::passport_std(c_p), "forged");
  AttackReport rep;
  rep.attack.kind = AttackSpec::Kind::ambiguity;
  rep.attack.gammas = gammas;
  rep.attack.forge_seed = forge_seed;
  for (double gamma : gammas) {
    const Matrix c_t = interpolate(c_p.matrix, forged.matrix, gamma);
    AttackPoint pt;
    pt.strength = gamma;
    pt.task_metric = metric_rmse(task.base, adapter.b_up, adapter.a_down, c_t,
                                 task, adapter.alpha_over_r);
    const ExtractionResult det = detect(c_t, c_p.matrix);
    pt.detect_score = det.detect_score;
    pt.p_value = det.p_value;
    rep.points.push_back(pt);
  }
  return rep;
}

/// Runs every spec against the released weights, extracting with the owner's
/// private factors at each point. A failing spec records its error message
/// in its report instead of aborting the remaining specs.
inline std::vector<AttackReport> run_attack_suite(
    const SealedAdapter& adapter, const PublicAdapter& pub,
    const SyntheticTask& task, const std::vector<AttackSpec>& specs) {
  std::vector<AttackReport> reports;
  reports.reserve(specs.size());
  for (const AttackSpec& spec : specs) {
    AttackReport rep;
    rep.attack = spec;
    try {
      spec.validate();
      switch (spec.kind) {
        case AttackSpec::Kind::prune:
          for (double ratio : spec.ratios)
            rep.points.push_back(detail::detection_point(
                adapter, prune(pub, ratio), task, ratio));
          break;
        case AttackSpec::Kind::obfuscate:
          for (std::size_t k : spec.ranks)
            rep.points.push_back(detail::detection_point(
                adapter, obfuscate_attack(pub, k), task, double(k)));
          break;
        case AttackSpec::Kind::finetune: {
          const SyntheticTask attack_task =
              spec.same_task ? task
                             : make_task(spec.task_seed, task.b(), task.a(),
                                         pub.b_pub.cols(), task.q,
                                         task.n_train(), task.n_val(),
                                         task.noise_std);
          rep.points.push_back(detail::detection_point(
              adapter,
              finetune_attack(pub, attack_task, spec.epochs,
                              spec.learning_rate, spec.batch_size, spec.seed),
              task, double(spec.epochs)));
          break;
        }
        case AttackSpec::Kind::ambiguity:
          rep = ambiguity_sweep(adapter, task, spec.gammas, spec.forge_seed);
          rep.attack = spec;
          break;
      }
    } catch (const Error& e) {
      rep.points.clear();
      rep.error = e.what();
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace seal

#endif  // SEAL_ATTACKS_HPP
