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

// Command-line front end for the sealwm toolkit. Subcommands cover the full
// lifecycle: gen-passport, train, hide, extract, verify, attack, spectrum.
// Exit codes: 0 success (for verify: ownership verified), 1 verification
// rejected, 2 any error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seal/seal.hpp"

namespace {

using nlohmann::json;

void emit(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw seal::ValidationError("cannot open for writing: " + path);
  f << text;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw seal::ValidationError("cannot open for writing: " + path);
  f << text;
}

json task_meta(const seal::SyntheticTask& task) {
  return json{{"seed", task.seed},       {"b", task.b()},
              {"a", task.a()},           {"q", task.q},
              {"n_train", task.n_train()}, {"n_val", task.n_val()},
              {"noise_std", task.noise_std}};
}

seal::SyntheticTask task_from_meta(const json& meta, std::size_t r) {
  return seal::make_task(meta.at("seed").get<std::uint64_t>(),
                         meta.at("b").get<std::size_t>(),
                         meta.at("a").get<std::size_t>(), r,
                         meta.at("q").get<std::size_t>(),
                         meta.at("n_train").get<std::size_t>(),
                         meta.at("n_val").get<std::size_t>(),
                         meta.at("noise_std").get<double>());
}

struct OwnerBundle {
  seal::SealedAdapter adapter;
  seal::SyntheticTask task;
};

OwnerBundle load_private(const std::string& path) {
  const seal::TensorContainer c = seal::TensorContainer::read(path);
  if (c.role != "private")
    throw seal::RoleError("expected a private bundle, got role '" + c.role +
                          "' in " + path);
  seal::Passport primary = seal::make_explicit(c.get("C").matrix, "C");
  seal::Passport extra = seal::make_explicit(c.get("C_p").matrix, "C_p");
  const json& meta = c.metadata;
  if (meta.contains("passport_seed")) {
    primary.provenance.kind = seal::Provenance::Kind::gaussian;
    primary.provenance.seed = meta["passport_seed"].get<std::uint64_t>();
    primary.provenance.std = meta.value("passport_std", 1.0);
    extra.provenance = primary.provenance;
    extra.provenance.seed += 1;
  }
  seal::PassportSet set(std::move(primary), std::move(extra));
  const std::size_t r = set.primary.r();
  seal::SealedAdapter adapter{c.get("B").matrix, c.get("A").matrix,
                              std::move(set),
                              seal::parse_operator(meta.value("operator",
                                                              std::string("matmul"))),
                              meta.value("alpha_over_r", 1.0)};
  return {std::move(adapter), task_from_meta(meta.at("task"), r)};
}

seal::PublicAdapter load_public(const std::string& path) {
  const seal::TensorContainer c = seal::TensorContainer::read(path);
  if (c.role != "public")
    throw seal::RoleError("expected a public bundle, got role '" + c.role +
                          "' in " + path);
  seal::PublicAdapter pub;
  pub.b_pub = c.get("B_pub").matrix;
  pub.a_pub = c.get("A_pub").matrix;
  pub.op = seal::parse_operator(c.metadata.value("operator", std::string("matmul")));
  pub.alpha_over_r = c.metadata.value("alpha_over_r", 1.0);
  return pub;
}

void save_public(const seal::PublicAdapter& pub, const json& extra_meta,
                 const std::string& path) {
  seal::TensorContainer c;
  c.role = "public";
  c.metadata = extra_meta;
  c.metadata["operator"] = seal::to_string(pub.op);
  c.metadata["alpha_over_r"] = pub.alpha_over_r;
  c.add("B_pub", pub.b_pub, "public");
  c.add("A_pub", pub.a_pub, "public");
  c.write(path);
}

int cmd_gen_passport(std::uint64_t seed, std::size_t r, double std,
                     const std::string& image, const std::string& out) {
  seal::Passport p =
      image.empty() ? seal::gen_gaussian(seed, r, std)
                    : [&] {
                        const seal::GrayImage img = seal::read_pgm(image);
                        return seal::gen_from_image(img.pixels, img.width,
                                                    img.height, r);
                      }();
  seal::TensorContainer c;
  c.role = "passport";
  c.metadata["r"] = r;
  if (image.empty()) {
    c.metadata["provenance"] = "gaussian";
    c.metadata["seed"] = seed;
    c.metadata["std"] = std;
  } else {
    c.metadata["provenance"] = "image";
    c.metadata["source_digest"] = p.provenance.source_digest;
    c.metadata["width"] = p.provenance.width;
    c.metadata["height"] = p.provenance.height;
  }
  c.add("C", p.matrix, "passport");
  c.write(out);

  double mean = 0.0;
  for (double v : p.matrix.data()) mean += v;
  mean /= double(p.matrix.size());
  emit(json{{"command", "gen-passport"},
            {"r", r},
            {"mean", mean},
            {"frobenius_norm", seal::frobenius_norm(p.matrix)}},
       "");
  return 0;
}

int cmd_train(const seal::ExperimentConfig& cfg, const std::string& out,
              const std::string& report_path) {
  const seal::SyntheticTask task =
      seal::make_task(cfg.task.seed, cfg.task.b, cfg.task.a, cfg.train.r,
                      cfg.task.q, cfg.task.n_train, cfg.task.n_val,
                      cfg.task.noise_std);
  const seal::PassportSet passports(
      seal::gen_gaussian(cfg.passports.seed, cfg.train.r, cfg.passports.std, "C"),
      seal::gen_gaussian(cfg.passports.seed + 1, cfg.train.r, cfg.passports.std,
                         "C_p"));
  seal::TrainConfig train_cfg = cfg.train;
  train_cfg.b = cfg.task.b;
  train_cfg.a = cfg.task.a;
  train_cfg.n_train = cfg.task.n_train;
  train_cfg.n_val = cfg.task.n_val;
  if (cfg.stabilize_lr)
    train_cfg.learning_rate =
        seal::stabilized_lr(train_cfg.learning_rate, passports);

  auto [adapter, report] = seal::train(task, train_cfg, passports);

  seal::TensorContainer c;
  c.role = "private";
  c.metadata["task"] = task_meta(task);
  c.metadata["train_seed"] = train_cfg.seed;
  c.metadata["learning_rate"] = train_cfg.learning_rate;
  c.metadata["epochs"] = train_cfg.epochs;
  c.metadata["batch_size"] = train_cfg.batch_size;
  c.metadata["operator"] = seal::to_string(adapter.op);
  c.metadata["alpha_over_r"] = adapter.alpha_over_r;
  c.metadata["passport_seed"] = cfg.passports.seed;
  c.metadata["passport_std"] = cfg.passports.std;
  c.add("B", adapter.b_up, "private");
  c.add("A", adapter.a_down, "private");
  c.add("C", adapter.passports.primary.matrix, "passport");
  c.add("C_p", adapter.passports.private_extra.matrix, "passport");
  c.write(out);

  json rep{{"command", "train"},
           {"final_loss", report.loss_per_epoch.back()},
           {"final_metric_per_passport", report.final_metric_per_passport},
           {"passport_usage_counts", report.passport_usage_counts}};
  emit(rep, report_path);
  return 0;
}

int cmd_hide(const std::string& in, const std::string& out) {
  OwnerBundle owner = load_private(in);
  const seal::PublicAdapter pub = seal::hide(owner.adapter);
  const seal::TensorContainer priv = seal::TensorContainer::read(in);
  json meta;
  meta["task"] = priv.metadata.at("task");
  save_public(pub, meta, out);
  emit(json{{"command", "hide"},
            {"merge_residual",
             seal::rel_frobenius_diff(
                 seal::star(pub.b_pub, pub.a_pub, pub.op),
                 seal::seal_delta(owner.adapter.b_up,
                                  owner.adapter.passports.primary.matrix,
                                  owner.adapter.a_down, owner.adapter.op))}},
       "");
  return 0;
}

int cmd_extract(const std::string& public_path, const std::string& private_path,
                double alpha, const std::string& out,
                const std::string& report_path) {
  OwnerBundle owner = load_private(private_path);
  const seal::PublicAdapter pub = load_public(public_path);
  const seal::Matrix c_ext =
      seal::extract(pub, owner.adapter.b_up, owner.adapter.a_down);
  const seal::ExtractionResult res =
      seal::detect(c_ext, owner.adapter.passports.primary.matrix, alpha);
  if (!out.empty()) {
    seal::TensorContainer c;
    c.role = "private";
    c.metadata["alpha"] = alpha;
    c.add("C_ext", c_ext, "private");
    c.write(out);
  }
  emit(json{{"command", "extract"},
            {"sign_matches", res.sign_matches},
            {"n_bits", res.n_bits},
            {"p_value", res.p_value},
            {"detect_score", res.detect_score},
            {"detected", res.detected},
            {"alpha", alpha}},
       report_path);
  return 0;
}

int cmd_verify(const std::string& public_path, const std::string& private_path,
               double epsilon, const std::string& report_path) {
  OwnerBundle owner = load_private(private_path);
  const seal::PublicAdapter pub = load_public(public_path);
  const seal::FidelityReport rep = seal::verify_fidelity(
      pub, owner.adapter.b_up, owner.adapter.a_down,
      owner.adapter.passports.primary.matrix,
      owner.adapter.passports.private_extra.matrix, owner.task, epsilon);
  emit(json{{"command", "verify"},
            {"metric_a", rep.metric_a},
            {"metric_b", rep.metric_b},
            {"delta", rep.delta},
            {"epsilon", rep.epsilon},
            {"reconstruction_ok", rep.reconstruction_ok},
            {"verdict", rep.verdict}},
       report_path);
  return rep.verdict ? 0 : 1;
}

int cmd_attack(const std::string& public_path, const std::string& private_path,
               const seal::AttackSpec& spec, const std::string& out,
               const std::string& report_path, const std::string& csv_path) {
  OwnerBundle owner = load_private(private_path);
  const seal::PublicAdapter pub = load_public(public_path);
  const std::vector<seal::AttackReport> reports =
      seal::run_attack_suite(owner.adapter, pub, owner.task, {spec});
  const seal::AttackReport& rep = reports.front();
  if (!rep.error.empty()) throw seal::ValidationError(rep.error);

  if (!out.empty()) {
    seal::PublicAdapter attacked = pub;
    switch (spec.kind) {
      case seal::AttackSpec::Kind::prune:
        attacked = seal::prune(pub, spec.ratios.back());
        break;
      case seal::AttackSpec::Kind::obfuscate:
        attacked = seal::obfuscate_attack(pub, spec.ranks.back());
        break;
      case seal::AttackSpec::Kind::finetune:
        attacked = seal::finetune_attack(
            pub,
            spec.same_task ? owner.task
                           : seal::make_task(spec.task_seed, owner.task.b(),
                                             owner.task.a(), pub.b_pub.cols(),
                                             owner.task.q, owner.task.n_train(),
                                             owner.task.n_val(),
                                             owner.task.noise_std),
            spec.epochs, spec.learning_rate, spec.batch_size, spec.seed);
        break;
      case seal::AttackSpec::Kind::ambiguity:
        throw seal::ValidationError(
            "ambiguity produces no attacked weights to persist");
    }
    json meta;
    meta["attack"] = spec.kind_name();
    save_public(attacked, meta, out);
  }

  json points = json::array();
  std::string csv = "strength,task_metric,detect_score,p_value\n";
  for (const auto& pt : rep.points) {
    points.push_back({{"strength", pt.strength},
                      {"task_metric", pt.task_metric},
                      {"detect_score", pt.detect_score},
                      {"p_value", pt.p_value}});
    csv += seal::format_double(pt.strength) + "," +
           seal::format_double(pt.task_metric) + "," +
           seal::format_double(pt.detect_score) + "," +
           seal::format_double(pt.p_value) + "\n";
  }
  if (!csv_path.empty()) write_text(csv, csv_path);
  emit(json{{"command", "attack"}, {"kind", spec.kind_name()}, {"points", points}},
       report_path);
  return 0;
}

int cmd_spectrum(const std::vector<std::string>& inputs,
                 const std::vector<std::string>& labels, std::size_t top_k,
                 const std::string& out) {
  if (inputs.empty()) throw seal::ValidationError("spectrum: no inputs");
  if (!labels.empty() && labels.size() != inputs.size())
    throw seal::ValidationError("spectrum: labels must match inputs");
  std::vector<seal::SpectrumReport> reports;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const seal::PublicAdapter pub = load_public(inputs[i]);
    const std::string label = labels.empty() ? inputs[i] : labels[i];
    reports.push_back(seal::spectrum(pub.delta(), top_k, label));
  }
  const std::string csv = seal::cdf_csv(seal::cdf_table(reports));
  if (out.empty())
    std::cout << csv;
  else
    write_text(csv, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sealwm: passport watermarking toolkit for low-rank adapters"};
  app.require_subcommand(1);

  // gen-passport
  auto* gen = app.add_subcommand("gen-passport", "Generate a passport container");
  std::uint64_t gen_seed = 0;
  std::size_t gen_r = 4;
  double gen_std = 1.0;
  std::string gen_image, gen_out;
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--r", gen_r, "passport size r");
  gen->add_option("--std", gen_std, "gaussian std");
  gen->add_option("--image", gen_image, "P5 PGM image source");
  gen->add_option("-o,--output", gen_out, "output container")->required();

  // train
  auto* train = app.add_subcommand("train", "Entangled training on a synthetic task");
  std::string train_config, train_out, train_report;
  std::uint64_t tr_seed = 1000, tr_task_seed = 0, tr_pass_seed = 7;
  std::size_t tr_b = 16, tr_a = 16, tr_r = 4, tr_q = 2;
  std::size_t tr_ntrain = 512, tr_nval = 256, tr_epochs = 200, tr_bs = 32;
  double tr_lr = 5e-3, tr_std = 1.0, tr_noise = 0.0;
  std::string tr_policy = "alternate_random";
  bool tr_no_stab = false;
  train->add_option("--config", train_config, "experiment config JSON");
  train->add_option("--seed", tr_seed, "training RNG seed");
  train->add_option("--task-seed", tr_task_seed, "task seed");
  train->add_option("--b", tr_b, "output dim");
  train->add_option("--a", tr_a, "input dim");
  train->add_option("--r", tr_r, "adapter rank");
  train->add_option("--q", tr_q, "teacher rank");
  train->add_option("--n-train", tr_ntrain, "training samples");
  train->add_option("--n-val", tr_nval, "validation samples");
  train->add_option("--epochs", tr_epochs, "epochs");
  train->add_option("--batch-size", tr_bs, "batch size");
  train->add_option("--lr", tr_lr, "learning rate");
  train->add_option("--std", tr_std, "passport std");
  train->add_option("--passport-seed", tr_pass_seed, "passport seed");
  train->add_option("--noise-std", tr_noise, "target noise std");
  train->add_option("--policy", tr_policy, "passport policy");
  train->add_flag("--no-stabilize-lr", tr_no_stab, "skip passport lr rescaling");
  train->add_option("-o,--output", train_out, "private bundle output")->required();
  train->add_option("--report", train_report, "JSON report path");

  // hide
  auto* hide = app.add_subcommand("hide", "Camouflage the passport into public weights");
  std::string hide_in, hide_out;
  hide->add_option("--in", hide_in, "private bundle")->required();
  hide->add_option("-o,--output", hide_out, "public bundle output")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract and detect the passport");
  std::string ex_public, ex_private, ex_out, ex_report;
  double ex_alpha = seal::kDefaultAlpha;
  extract->add_option("--public", ex_public, "public bundle")->required();
  extract->add_option("--private", ex_private, "owner's private bundle")->required();
  extract->add_option("--alpha", ex_alpha, "significance level");
  extract->add_option("-o,--output", ex_out, "extracted passport container");
  extract->add_option("--report", ex_report, "JSON report path");

  // verify
  auto* verify = app.add_subcommand("verify", "Fidelity-gap ownership verification");
  std::string vf_public, vf_private, vf_report;
  double vf_epsilon = 0.05;
  verify->add_option("--public", vf_public, "public bundle")->required();
  verify->add_option("--private", vf_private, "claimed private bundle")->required();
  verify->add_option("--epsilon", vf_epsilon, "fidelity gap threshold")->required();
  verify->add_option("--report", vf_report, "JSON report path");

  // attack
  auto* attack = app.add_subcommand("attack", "Run a watermark attack sweep");
  std::string at_public, at_private, at_kind, at_out, at_report, at_csv;
  std::vector<double> at_ratios, at_gammas;
  std::vector<std::size_t> at_ranks;
  std::uint64_t at_seed = 0, at_forge = 99, at_task_seed = 0;
  std::size_t at_epochs = 0, at_bs = 32;
  double at_lr = 5e-3;
  bool at_cross_task = false;
  attack->add_option("--public", at_public, "public bundle")->required();
  attack->add_option("--private", at_private, "owner's private bundle")->required();
  attack->add_option("--kind", at_kind, "prune|obfuscate|ambiguity|finetune")->required();
  attack->add_option("--ratios", at_ratios, "prune ratios")->delimiter(',');
  attack->add_option("--rank", at_ranks, "obfuscation target ranks")->delimiter(',');
  attack->add_option("--gammas", at_gammas, "ambiguity gammas")->delimiter(',');
  attack->add_option("--forge-seed", at_forge, "forged passport seed");
  attack->add_option("--epochs", at_epochs, "finetune epochs");
  attack->add_option("--lr", at_lr, "finetune learning rate");
  attack->add_option("--batch-size", at_bs, "finetune batch size");
  attack->add_option("--seed", at_seed, "attack RNG seed");
  attack->add_option("--task-seed", at_task_seed, "cross-task teacher seed");
  attack->add_flag("--cross-task", at_cross_task, "finetune on a fresh task");
  attack->add_option("-o,--output", at_out, "attacked public bundle");
  attack->add_option("--report", at_report, "JSON report path");
  attack->add_option("--csv", at_csv, "CSV sweep path");

  // spectrum
  auto* spect = app.add_subcommand("spectrum", "Singular-spectrum CDF of public updates");
  std::vector<std::string> sp_inputs, sp_labels;
  std::size_t sp_topk = 32;
  std::string sp_out;
  spect->add_option("--input", sp_inputs, "public bundles")->required();
  spect->add_option("--label", sp_labels, "labels, one per input");
  spect->add_option("--top-k", sp_topk, "singular values per module");
  spect->add_option("-o,--output", sp_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      if (gen_out.empty()) throw seal::ValidationError("missing output path");
      return cmd_gen_passport(gen_seed, gen_r, gen_std, gen_image, gen_out);
    }
    if (train->parsed()) {
      seal::ExperimentConfig cfg;
      if (!train_config.empty()) {
        cfg = seal::ExperimentConfig::from_file(train_config);
      } else {
        cfg.task = {tr_task_seed, tr_b, tr_a, tr_q, tr_ntrain, tr_nval, tr_noise};
        cfg.train.seed = tr_seed;
        cfg.train.r = tr_r;
        cfg.train.epochs = tr_epochs;
        cfg.train.batch_size = tr_bs;
        cfg.train.learning_rate = tr_lr;
        cfg.passports = {tr_pass_seed, tr_std};
        cfg.stabilize_lr = !tr_no_stab;
        if (tr_policy == "alternate_random")
          cfg.train.passport_policy = seal::PassportPolicy::alternate_random();
        else if (tr_policy == "alternate_even_odd")
          cfg.train.passport_policy = seal::PassportPolicy::alternate_even_odd();
        else if (tr_policy == "single")
          cfg.train.passport_policy = seal::PassportPolicy::single();
        else
          throw seal::ValidationError("unknown policy: " + tr_policy);
      }
      return cmd_train(cfg, train_out, train_report);
    }
    if (hide->parsed()) return cmd_hide(hide_in, hide_out);
    if (extract->parsed())
      return cmd_extract(ex_public, ex_private, ex_alpha, ex_out, ex_report);
    if (verify->parsed())
      return cmd_verify(vf_public, vf_private, vf_epsilon, vf_report);
    if (attack->parsed()) {
      seal::AttackSpec spec;
      if (at_kind == "prune") {
        spec.kind = seal::AttackSpec::Kind::prune;
        if (at_ratios.empty())
          throw seal::ValidationError("prune needs --ratios");
        spec.ratios = at_ratios;
      } else if (at_kind == "obfuscate") {
        spec.kind = seal::AttackSpec::Kind::obfuscate;
        if (at_ranks.empty()) throw seal::ValidationError("obfuscate needs --rank");
        spec.ranks = at_ranks;
      } else if (at_kind == "ambiguity") {
        spec.kind = seal::AttackSpec::Kind::ambiguity;
        if (at_gammas.empty())
          throw seal::ValidationError("ambiguity needs --gammas");
        spec.gammas = at_gammas;
        spec.forge_seed = at_forge;
      } else if (at_kind == "finetune") {
        spec.kind = seal::AttackSpec::Kind::finetune;
        spec.epochs = at_epochs;
        spec.learning_rate = at_lr;
        spec.batch_size = at_bs;
        spec.same_task = !at_cross_task;
        spec.task_seed = at_task_seed;
      } else {
        throw seal::ValidationError("unknown attack kind: " + at_kind);
      }
      spec.seed = at_seed;
      return cmd_attack(at_public, at_private, spec, at_out, at_report, at_csv);
    }
    if (spect->parsed())
      return cmd_spectrum(sp_inputs, sp_labels, sp_topk, sp_out);
  } catch (const seal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
