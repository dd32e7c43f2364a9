// graphaug command-line tool. Talks to the core exclusively through the C API
// (graphaug/capi.h); configuration merging happens client-side on JSON text.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "graphaug/capi.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string dataset_path;
  std::int64_t seed = -1;
  bool plots = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool out_required = true) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config file");
  auto* out = cmd->add_option("--out", flags.out_dir, "output directory");
  if (out_required) out->required();
  cmd->add_option("--dataset", flags.dataset_path,
                  "dataset override: serialized dataset file (kind=file) or TU directory");
  cmd->add_option("--seed", flags.seed, "seed override for this stage");
  cmd->add_flag("--plots", flags.plots, "emit static SVG plots");
}

json load_config(const CommonFlags& flags) {
  json cfg = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in.good()) {
      std::cerr << "error: cannot open config file '" << flags.config_path << "'\n";
      std::exit(2);
    }
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      std::cerr << "error: " << flags.config_path << ": " << e.what() << "\n";
      std::exit(2);
    }
  }
  if (!flags.dataset_path.empty()) {
    const bool looks_tu = flags.dataset_path.find(".txt") == std::string::npos;
    cfg["dataset"] = {{"kind", looks_tu ? "tu" : "file"}, {"path", flags.dataset_path}};
  }
  if (flags.plots) cfg["plots"] = true;
  return cfg;
}

int run_stage(ga_status (*stage)(const char*, const char*), const json& cfg,
              const std::string& out_dir, const char* name) {
  const std::string text = cfg.dump();
  const ga_status status = stage(text.c_str(), out_dir.c_str());
  if (status != GA_OK) {
    std::cerr << "error: " << name << ": " << ga_error_message() << "\n";
    return 1;
  }
  std::cout << name << ": done, outputs in " << out_dir << "\n";
  return 0;
}

json& subobject(json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_object()) cfg[key] = json::object();
  return cfg[key];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphAug: automated label-invariant graph augmentation"};
  app.require_subcommand(1);

  // gen-data
  CommonFlags gen_flags;
  std::string gen_kind = "colors";
  int gen_n = 0, gen_min_nodes = 0, gen_max_nodes = 0;
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset with exact labels");
  add_common(gen, gen_flags);
  gen->add_option("--kind", gen_kind, "colors|triangles");
  gen->add_option("--n", gen_n, "number of graphs");
  gen->add_option("--min-nodes", gen_min_nodes, "minimum node count");
  gen->add_option("--max-nodes", gen_max_nodes, "maximum node count");

  // train-reward
  CommonFlags reward_flags;
  bool no_cross_graph = false;
  auto* reward = app.add_subcommand("train-reward", "train the label-invariance reward model");
  add_common(reward, reward_flags);
  reward->add_flag("--no-cross-graph", no_cross_graph,
                   "ablation: disable cross-graph message passing");

  // train-policy
  CommonFlags policy_flags;
  std::string reward_ckpt, single_category;
  bool category_only = false;
  auto* policy = app.add_subcommand("train-policy", "train the augmentation policy (REINFORCE)");
  add_common(policy, policy_flags);
  policy->add_option("--reward-checkpoint", reward_ckpt, "trained reward model checkpoint");
  policy->add_flag("--category-only", category_only,
                   "ablation: learned category selection with uniform element rates");
  policy->add_option("--single-category", single_category,
                     "ablation: fix the category (masknf|dropnode|perturbedge)");

  // train-classifier
  CommonFlags cls_flags;
  std::string policy_ckpt, augment_mode, augment_kind;
  auto* cls = app.add_subcommand("train-classifier", "train/evaluate a GIN or GCN classifier");
  add_common(cls, cls_flags);
  cls->add_option("--policy-checkpoint", policy_ckpt, "trained policy checkpoint (augment=policy)");
  cls->add_option("--augment", augment_mode, "augmentation mode: none|uniform|gt|policy");
  cls->add_option("--transform", augment_kind, "transform kind for uniform/gt modes");

  // reproduce
  CommonFlags repro_flags;
  std::string experiment = "colors-ordering";
  bool repro_category_only = false, repro_no_cross = false;
  std::string repro_single;
  auto* repro = app.add_subcommand("reproduce", "run a full desk-scale experiment pipeline");
  add_common(repro, repro_flags);
  repro->add_option("--experiment", experiment, "colors-ordering|triangles-suite|smoke");
  repro->add_flag("--category-only", repro_category_only, "ablation flag for the policy arm");
  repro->add_option("--single-category", repro_single, "ablation: fix the policy category");
  repro->add_flag("--no-cross-graph", repro_no_cross, "ablation flag for the reward model");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    json cfg = load_config(gen_flags);
    json& d = subobject(cfg, "dataset");
    if (!d.contains("kind")) d["kind"] = gen_kind;
    if (gen_n > 0) d["n_graphs"] = gen_n;
    if (gen_min_nodes > 0) d["min_nodes"] = gen_min_nodes;
    if (gen_max_nodes > 0) d["max_nodes"] = gen_max_nodes;
    if (gen_flags.seed >= 0) d["seed"] = gen_flags.seed;
    return run_stage(&ga_gen_data, cfg, gen_flags.out_dir, "gen-data");
  }
  if (reward->parsed()) {
    json cfg = load_config(reward_flags);
    if (reward_flags.seed >= 0) subobject(subobject(cfg, "reward"), "train")["seed"] = reward_flags.seed;
    if (no_cross_graph) subobject(cfg, "reward")["cross_graph"] = false;
    return run_stage(&ga_train_reward, cfg, reward_flags.out_dir, "train-reward");
  }
  if (policy->parsed()) {
    json cfg = load_config(policy_flags);
    json& p = subobject(cfg, "policy");
    if (policy_flags.seed >= 0) subobject(p, "train")["seed"] = policy_flags.seed;
    if (!reward_ckpt.empty()) p["reward_checkpoint"] = reward_ckpt;
    if (category_only) p["category_only"] = true;
    if (!single_category.empty()) p["single_category"] = single_category;
    return run_stage(&ga_train_policy, cfg, policy_flags.out_dir, "train-policy");
  }
  if (cls->parsed()) {
    json cfg = load_config(cls_flags);
    json& c = subobject(cfg, "classifier");
    if (cls_flags.seed >= 0) c["seeds"] = json::array({cls_flags.seed});
    if (!policy_ckpt.empty()) c["policy_checkpoint"] = policy_ckpt;
    if (!augment_mode.empty()) subobject(c, "augment")["mode"] = augment_mode;
    if (!augment_kind.empty()) subobject(c, "augment")["kind"] = augment_kind;
    return run_stage(&ga_train_classifier, cfg, cls_flags.out_dir, "train-classifier");
  }
  json cfg = load_config(repro_flags);
  cfg["experiment"] = experiment;
  if (repro_flags.seed >= 0) cfg["seed"] = repro_flags.seed;
  if (repro_category_only) subobject(cfg, "policy")["category_only"] = true;
  if (!repro_single.empty()) subobject(cfg, "policy")["single_category"] = repro_single;
  if (repro_no_cross) subobject(cfg, "reward")["cross_graph"] = false;
  return run_stage(&ga_reproduce, cfg, repro_flags.out_dir, "reproduce");
}
