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

#ifndef SEAL_CONFIG_HPP
#define SEAL_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seal/attacks.hpp"
#include "seal/error.hpp"
#include "seal/operators.hpp"
#include "seal/train.hpp"

namespace seal {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::vector<std::string>& known,
                                const std::string& where) {
  if (!obj.is_object())
    throw ValidationError("config: " + where + " must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const auto& k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ValidationError("config: unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace detail

struct TaskSpecConfig {
  std::uint64_t seed = 0;
  std::size_t b = 16, a = 16, q = 2;
  std::size_t n_train = 512, n_val = 256;
  double noise_std = 0.0;
};

struct PassportSpecConfig {
  std::uint64_t seed = 7;
  double std = 1.0;
};

struct OutputPaths {
  std::string private_bundle;
  std::string public_bundle;
  std::string report;
};

/// Schema-validated experiment description. Unknown keys anywhere in the
/// document are rejected before any computation runs.
struct ExperimentConfig {
  TaskSpecConfig task;
  TrainConfig train;
  PassportSpecConfig passports;
  std::vector<AttackSpec> attacks;
  double epsilon = 0.05;
  double alpha = kDefaultAlpha;
  bool stabilize_lr = true;
  OutputPaths outputs;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config: cannot open " + path);
    nlohmann::json doc;
    try {
      f >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config: bad json: ") + e.what());
    }
    return from_json(doc);
  }
};

inline AttackSpec attack_spec_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j,
      {"kind", "seed", "ratios", "ranks", "gammas", "forge_seed", "epochs",
       "task_seed", "same_task", "learning_rate", "batch_size"},
      "attacks[]");
  AttackSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "prune")
    spec.kind = AttackSpec::Kind::prune;
  else if (kind == "obfuscate")
    spec.kind = AttackSpec::Kind::obfuscate;
  else if (kind == "ambiguity")
    spec.kind = AttackSpec::Kind::ambiguity;
  else if (kind == "finetune")
    spec.kind = AttackSpec::Kind::finetune;
  else
    throw ValidationError("config: unknown attack kind " + kind);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.ratios = j.value("ratios", std::vector<double>{});
  spec.ranks = j.value("ranks", std::vector<std::size_t>{});
  spec.gammas = j.value("gammas", std::vector<double>{});
  spec.forge_seed = j.value("forge_seed", std::uint64_t{0});
  spec.epochs = j.value("epochs", std::size_t{0});
  spec.task_seed = j.value("task_seed", std::uint64_t{0});
  spec.same_task = j.value("same_task", true);
  spec.learning_rate = j.value("learning_rate", 5e-3);
  spec.batch_size = j.value("batch_size", std::size_t{32});
  spec.validate();
  return spec;
}

inline ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  detail::reject_unknown_keys(
      doc, {"task", "train", "passports", "attacks", "epsilon", "alpha",
            "outputs"},
      "top level");
  ExperimentConfig cfg;

  if (doc.contains("task")) {
    const auto& t = doc["task"];
    detail::reject_unknown_keys(
        t, {"seed", "b", "a", "q", "n_train", "n_val", "noise_std"}, "task");
    cfg.task.seed = t.value("seed", std::uint64_t{0});
    cfg.task.b = t.value("b", std::size_t{16});
    cfg.task.a = t.value("a", std::size_t{16});
    cfg.task.q = t.value("q", std::size_t{2});
    cfg.task.n_train = t.value("n_train", std::size_t{512});
    cfg.task.n_val = t.value("n_val", std::size_t{256});
    cfg.task.noise_std = t.value("noise_std", 0.0);
  }

  if (doc.contains("train")) {
    const auto& t = doc["train"];
    detail::reject_unknown_keys(
        t,
        {"seed", "r", "epochs", "batch_size", "learning_rate",
         "passport_policy", "operator", "stabilize_lr"},
        "train");
    cfg.train.seed = t.value("seed", std::uint64_t{0});
    cfg.train.r = t.value("r", std::size_t{4});
    cfg.train.epochs = t.value("epochs", std::size_t{200});
    cfg.train.batch_size = t.value("batch_size", std::size_t{32});
    cfg.train.learning_rate = t.value("learning_rate", 5e-3);
    cfg.train.op = parse_operator(t.value("operator", std::string("matmul")));
    cfg.stabilize_lr = t.value("stabilize_lr", true);
    const std::string policy =
        t.value("passport_policy", std::string("alternate_random"));
    if (policy == "alternate_random")
      cfg.train.passport_policy = PassportPolicy::alternate_random();
    else if (policy == "alternate_even_odd")
      cfg.train.passport_policy = PassportPolicy::alternate_even_odd();
    else if (policy == "single")
      cfg.train.passport_policy = PassportPolicy::single();
    else
      throw ValidationError("config: unknown passport_policy " + policy);
  }
  cfg.train.b = cfg.task.b;
  cfg.train.a = cfg.task.a;
  cfg.train.n_train = cfg.task.n_train;
  cfg.train.n_val = cfg.task.n_val;

  if (doc.contains("passports")) {
    const auto& p = doc["passports"];
    detail::reject_unknown_keys(p, {"seed", "std"}, "passports");
    cfg.passports.seed = p.value("seed", std::uint64_t{7});
    cfg.passports.std = p.value("std", 1.0);
    if (!(cfg.passports.std > 0.0))
      throw ValidationError("config: passport std must be > 0");
  }

  if (doc.contains("attacks")) {
    if (!doc["attacks"].is_array())
      throw ValidationError("config: attacks must be an array");
    for (const auto& a : doc["attacks"])
      cfg.attacks.push_back(attack_spec_from_json(a));
  }

  cfg.epsilon = doc.value("epsilon", 0.05);
  cfg.alpha = doc.value("alpha", kDefaultAlpha);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw ValidationError("config: alpha must be in (0,1)");
  if (cfg.epsilon < 0.0)
    throw ValidationError("config: epsilon must be >= 0");

  if (doc.contains("outputs")) {
    const auto& o = doc["outputs"];
    detail::reject_unknown_keys(o, {"private", "public", "report"}, "outputs");
    cfg.outputs.private_bundle = o.value("private", std::string());
    cfg.outputs.public_bundle = o.value("public", std::string());
    cfg.outputs.report = o.value("report", std::string());
  }
  return cfg;
}

}  // namespace seal

#endif  // SEAL_CONFIG_HPP
