#include "graphaug/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "graphaug/config.hpp"
#include "graphaug/trainer.hpp"

namespace graphaug::experiments {

namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << text;
  check(out.good(), ErrorKind::Io, "write failure on " + path);
}

void prepare_out_dir(const std::string& out_dir, const nlohmann::json& resolved) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  check(!ec, ErrorKind::Io, "cannot create output directory " + out_dir);
  write_text((fs::path(out_dir) / "resolved_config.json").string(), resolved.dump(2) + "\n");
  write_text((fs::path(out_dir) / "config_hash.txt").string(), config_hash_hex(resolved) + "\n");
}

void validate_top_level(const nlohmann::json& config) {
  validate_keys(config, "config root",
                {"dataset", "reward", "policy", "classifier", "experiment", "plots", "seed"});
}

struct RewardStageConfig {
  MatchingConfig arch;
  RewardTrainConfig train;
  int eval_pairs = 200;
  std::string checkpoint;

  static RewardStageConfig from_json(const nlohmann::json& j, int feature_dim) {
    validate_keys(j, "reward",
                  {"layers", "hidden", "cross_graph", "readout", "train", "eval_pairs",
                   "checkpoint", "init_seed"});
    RewardStageConfig cfg;
    nlohmann::json arch = j;
    arch.erase("train");
    arch.erase("eval_pairs");
    arch.erase("checkpoint");
    arch["feature_dim"] = feature_dim;
    cfg.arch = MatchingConfig::from_json(arch);
    if (j.contains("train")) {
      validate_keys(j.at("train"), "reward.train",
                    {"epochs", "pairs_per_epoch", "batch_size", "lr", "seed", "max_pair_nodes"});
      cfg.train = RewardTrainConfig::from_json(j.at("train"));
    }
    cfg.eval_pairs = j.value("eval_pairs", cfg.eval_pairs);
    cfg.checkpoint = j.value("checkpoint", cfg.checkpoint);
    return cfg;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = arch.to_json();
    j["train"] = train.to_json();
    j["eval_pairs"] = eval_pairs;
    if (!checkpoint.empty()) j["checkpoint"] = checkpoint;
    return j;
  }
};

struct PolicyStageConfig {
  PolicyConfig arch;
  RLConfig train;
  std::string reward_checkpoint;

  static PolicyStageConfig from_json(const nlohmann::json& j, int feature_dim) {
    validate_keys(j, "policy",
                  {"encoder_layers", "hidden", "category_hidden", "head_hidden", "category_only",
                   "uniform_rate", "single_category", "train", "reward_checkpoint", "init_seed"});
    PolicyStageConfig cfg;
    nlohmann::json arch = j;
    arch.erase("train");
    arch.erase("reward_checkpoint");
    if (arch.contains("single_category")) {
      const std::string s = arch.at("single_category").get<std::string>();
      arch.erase("single_category");
      if (!s.empty()) arch["fixed_category"] = static_cast<int>(parse_category(s));
    }
    arch["feature_dim"] = feature_dim;
    cfg.arch = PolicyConfig::from_json(arch);
    if (j.contains("train")) {
      validate_keys(j.at("train"), "policy.train",
                    {"steps", "cap", "batch_size", "lr", "epochs", "moving_baseline", "seed"});
      cfg.train = RLConfig::from_json(j.at("train"));
    }
    cfg.reward_checkpoint = j.value("reward_checkpoint", cfg.reward_checkpoint);
    return cfg;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = arch.to_json();
    j["train"] = train.to_json();
    if (!reward_checkpoint.empty()) j["reward_checkpoint"] = reward_checkpoint;
    return j;
  }
};

std::vector<int> all_indices(const Dataset& d) {
  std::vector<int> idx(static_cast<std::size_t>(d.size()));
  for (int i = 0; i < d.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

// Training pool: fixed-split train part for synthetic/file datasets with
// declared sizes, everything otherwise (TU datasets are split per fold later).
std::vector<int> training_pool(const Dataset& d, const DatasetConfig& cfg, Split* split_out) {
  if (cfg.n_train > 0 && cfg.total_graphs() == d.size()) {
    const Split split = resolve_fold(cfg.fixed_split_spec(), 0);
    if (split_out) *split_out = split;
    return split.train;
  }
  if (split_out) *split_out = Split{};
  return all_indices(d);
}

void write_epoch_csv(const std::string& path, const std::string& header,
                     const std::vector<double>& values) {
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "cannot open " + path);
  out << "epoch," << header << "\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << "," << values[i] << "\n";
}

AugmentSpec build_augment_spec(const ClassifierStageConfig& cls, const Dataset& dataset,
                               const PolicyModel<float>* policy) {
  AugmentSpec spec;
  spec.mode = AugmentSpec::parse_mode(cls.augment_mode);
  spec.kind = parse_transform_kind(cls.augment_kind);
  spec.rate = cls.rate;
  spec.steps = cls.steps;
  spec.cap = cls.cap;
  spec.apply_cap = cls.apply_cap;
  spec.policy = policy;
  if (spec.mode == AugmentSpec::Mode::Gt) {
    if (dataset.name == "COLORS")
      spec.dataset_kind = DatasetKind::Colors;
    else if (dataset.name == "TRIANGLES")
      spec.dataset_kind = DatasetKind::Triangles;
    else
      fail(ErrorKind::InvalidArgument,
           "gt augmentation needs a label oracle; dataset '" + dataset.name +
               "' is not COLORS or TRIANGLES");
  }
  if (spec.mode == AugmentSpec::Mode::Policy)
    check(policy != nullptr, ErrorKind::State,
          "policy augmentation requires a policy checkpoint (run train-policy first and set "
          "classifier.policy_checkpoint)");
  return spec;
}

std::string method_name(const ClassifierStageConfig& cls) {
  const auto mode = AugmentSpec::parse_mode(cls.augment_mode);
  switch (mode) {
    case AugmentSpec::Mode::None: return "none";
    case AugmentSpec::Mode::Uniform: return "uniform-" + cls.augment_kind;
    case AugmentSpec::Mode::Gt: return "gt-" + cls.augment_kind;
    case AugmentSpec::Mode::Policy: return "graphaug";
  }
  return "?";
}

ClassifierTrainConfig to_train_config(const ClassifierStageConfig& cls, const Dataset& dataset,
                                      const AugmentSpec& spec) {
  ClassifierTrainConfig cfg;
  cfg.arch.kind = parse_model_kind(cls.model);
  cfg.arch.feature_dim = dataset.feature_dim;
  cfg.arch.layers = cls.layers;
  cfg.arch.hidden = cls.hidden;
  cfg.arch.num_classes = dataset.num_classes;
  cfg.arch.readout = cls.readout.empty() ? default_readout_for(dataset.name) : cls.readout;
  cfg.epochs = cls.epochs;
  cfg.batch_size = cls.batch_size;
  cfg.lr = cls.lr;
  cfg.augment = spec;
  return cfg;
}

// Fixed-split evaluation: one run per seed.
EvalReport run_fixed(const Dataset& dataset, const Split& split, const ClassifierStageConfig& cls,
                     const AugmentSpec& spec, const std::string& method) {
  EvalReport report;
  ClassifierTrainConfig cfg = to_train_config(cls, dataset, spec);
  for (const std::uint64_t seed : cls.seeds) {
    cfg.seed = seed;
    cfg.arch.init_seed = seed;
    const RunResult run = train_classifier(dataset, split, cfg);
    report.entries.push_back(
        {method, dataset.name, cls.model, 0, seed, run.test_acc});
  }
  report.finalize();
  return report;
}

}  // namespace

void gen_data(const nlohmann::json& config, const std::string& out_dir) {
  validate_top_level(config);
  check_arg(config.contains("dataset"), "gen-data: config needs a 'dataset' section");
  const DatasetConfig dcfg = DatasetConfig::from_json(config.at("dataset"));
  nlohmann::json resolved = {{"dataset", dcfg.to_json()}};
  prepare_out_dir(out_dir, resolved);

  const Dataset dataset = dcfg.materialize();
  save_dataset(dataset, (fs::path(out_dir) / "dataset.txt").string());

  nlohmann::json hist = nlohmann::json::object();
  int total = 0;
  for (const auto& [label, count] : class_histogram(dataset)) {
    hist[std::to_string(label)] = count;
    total += count;
  }
  nlohmann::json summary = {{"name", dataset.name},
                            {"graphs", dataset.size()},
                            {"classes", dataset.num_classes},
                            {"feature_dim", dataset.feature_dim},
                            {"histogram", hist},
                            {"histogram_total", total}};
  write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
}

void train_reward_stage(const nlohmann::json& config, const std::string& out_dir) {
  validate_top_level(config);
  check_arg(config.contains("dataset"), "train-reward: config needs a 'dataset' section");
  const DatasetConfig dcfg = DatasetConfig::from_json(config.at("dataset"));
  const Dataset dataset = dcfg.materialize();
  RewardStageConfig rcfg = RewardStageConfig::from_json(
      config.value("reward", nlohmann::json::object()), dataset.feature_dim);

  nlohmann::json resolved = {{"dataset", dcfg.to_json()}, {"reward", rcfg.to_json()}};
  prepare_out_dir(out_dir, resolved);

  Split split;
  const std::vector<int> pool = training_pool(dataset, dcfg, &split);
  MatchingEncoder<float> model(rcfg.arch);
  const RewardTrainResult result = train_reward_model(model, dataset, pool, rcfg.train);

  const std::string ckpt = (fs::path(out_dir) / "reward.ckpt").string();
  model.save(ckpt, result.steps);
  write_epoch_csv((fs::path(out_dir) / "loss_history.csv").string(), "loss", result.epoch_loss);

  // held-out pair accuracy on the validation part when a fixed split exists
  Rng eval_rng(rcfg.train.seed + 999);
  const std::vector<int>& eval_pool = split.val.empty() ? pool : split.val;
  const auto pairs = sample_pairs(dataset, eval_pool, rcfg.eval_pairs, eval_rng);
  const double pair_acc =
      evaluate_pairs(model, dataset, pairs, (fs::path(out_dir) / "pair_eval.csv").string());

  nlohmann::json summary = {{"checkpoint", ckpt},
                            {"final_loss", result.epoch_loss.back()},
                            {"heldout_pair_accuracy", pair_acc},
                            {"updates", result.steps},
                            {"skipped_large_graphs", result.skipped_large_graphs}};
  write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  if (config.value("plots", false))
    write_svg_curve((fs::path(out_dir) / "loss_curve.svg").string(), "reward model BCE loss",
                    result.epoch_loss);
}

void train_policy_stage(const nlohmann::json& config, const std::string& out_dir) {
  validate_top_level(config);
  check_arg(config.contains("dataset"), "train-policy: config needs a 'dataset' section");
  const DatasetConfig dcfg = DatasetConfig::from_json(config.at("dataset"));
  const Dataset dataset = dcfg.materialize();
  PolicyStageConfig pcfg = PolicyStageConfig::from_json(
      config.value("policy", nlohmann::json::object()), dataset.feature_dim);

  nlohmann::json resolved = {{"dataset", dcfg.to_json()}, {"policy", pcfg.to_json()}};
  prepare_out_dir(out_dir, resolved);

  check(!pcfg.reward_checkpoint.empty(), ErrorKind::State,
        "train-policy: missing reward-model checkpoint (set policy.reward_checkpoint; run "
        "train-reward first)");
  check(fs::exists(pcfg.reward_checkpoint), ErrorKind::State,
        "train-policy: reward-model checkpoint not found at '" + pcfg.reward_checkpoint +
            "' (run train-reward first)");
  const MatchingEncoder<float> reward_model = MatchingEncoder<float>::load(pcfg.reward_checkpoint);
  check_arg(reward_model.config().feature_dim == dataset.feature_dim,
            "train-policy: reward model feature dim does not match the dataset");

  const std::vector<int> pool = training_pool(dataset, dcfg, nullptr);
  PolicyModel<float> policy(pcfg.arch);
  const PolicyTrainResult result = train_policy(policy, dataset, pool, reward_model, pcfg.train);

  const std::string ckpt = (fs::path(out_dir) / "policy.ckpt").string();
  policy.save(ckpt, result.updates);
  write_epoch_csv((fs::path(out_dir) / "reward_curve.csv").string(), "mean_reward",
                  result.epoch_mean_reward);

  nlohmann::json summary = {{"checkpoint", ckpt},
                            {"final_mean_reward", result.epoch_mean_reward.back()},
                            {"updates", result.updates}};
  write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  if (config.value("plots", false))
    write_svg_curve((fs::path(out_dir) / "reward_curve.svg").string(), "mean trajectory reward",
                    result.epoch_mean_reward);
}

void train_classifier_stage(const nlohmann::json& config, const std::string& out_dir) {
  validate_top_level(config);
  check_arg(config.contains("dataset"), "train-classifier: config needs a 'dataset' section");
  const DatasetConfig dcfg = DatasetConfig::from_json(config.at("dataset"));
  const Dataset dataset = dcfg.materialize();
  ClassifierStageConfig ccfg =
      ClassifierStageConfig::from_json(config.value("classifier", nlohmann::json::object()));
  if (ccfg.readout.empty()) ccfg.readout = default_readout_for(dataset.name);

  nlohmann::json resolved = {{"dataset", dcfg.to_json()}, {"classifier", ccfg.to_json()}};
  prepare_out_dir(out_dir, resolved);

  std::unique_ptr<PolicyModel<float>> policy;
  if (AugmentSpec::parse_mode(ccfg.augment_mode) == AugmentSpec::Mode::Policy) {
    check(!ccfg.policy_checkpoint.empty(), ErrorKind::State,
          "train-classifier: augmentation mode 'policy' needs classifier.policy_checkpoint (run "
          "train-policy first)");
    check(fs::exists(ccfg.policy_checkpoint), ErrorKind::State,
          "train-classifier: policy checkpoint not found at '" + ccfg.policy_checkpoint +
              "' (run train-policy first)");
    policy = std::make_unique<PolicyModel<float>>(PolicyModel<float>::load(ccfg.policy_checkpoint));
    check_arg(policy->config().feature_dim == dataset.feature_dim,
              "train-classifier: policy feature dim does not match the dataset");
  }

  const AugmentSpec spec = build_augment_spec(ccfg, dataset, policy.get());
  const std::string method = method_name(ccfg);
  EvalReport report;
  if (ccfg.protocol == "cv") {
    report = run_cv(dataset, method, to_train_config(ccfg, dataset, spec), ccfg.folds,
                    ccfg.repeats, ccfg.seeds.empty() ? 17 : ccfg.seeds[0]);
  } else {
    const Split split = resolve_fold(dcfg.fixed_split_spec(), 0);
    report = run_fixed(dataset, split, ccfg, spec, method);
  }
  report.write_csv((fs::path(out_dir) / "results.csv").string());

  nlohmann::json summary = {{"method", method},
                            {"dataset", dataset.name},
                            {"model", ccfg.model},
                            {"mean_accuracy", report.mean},
                            {"std_accuracy", report.stddev},
                            {"runs", report.entries.size()}};
  write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  if (config.value("plots", false))
    write_svg_bars((fs::path(out_dir) / "accuracy.svg").string(), dataset.name + " test accuracy",
                   {{method, report.mean}});
}

void reproduce(const nlohmann::json& config, const std::string& out_dir) {
  validate_top_level(config);
  const std::string experiment = config.value("experiment", "colors-ordering");
  const std::uint64_t base_seed = config.value("seed", 1ULL);
  const bool smoke = experiment == "smoke";
  const bool colors = experiment == "colors-ordering" || smoke;
  check_arg(colors || experiment == "triangles-suite",
            "reproduce: unknown experiment '" + experiment +
                "' (want colors-ordering|triangles-suite|smoke)");

  // dataset defaults per experiment, overridable through the dataset section
  nlohmann::json dataset_json = config.value("dataset", nlohmann::json::object());
  if (!dataset_json.contains("kind")) dataset_json["kind"] = colors ? "colors" : "triangles";
  if (!dataset_json.contains("seed")) dataset_json["seed"] = base_seed;
  if (smoke) {
    for (const auto& [key, value] :
         std::map<std::string, int>{{"n_train", 120}, {"n_val", 40}, {"n_test", 40}})
      if (!dataset_json.contains(key)) dataset_json[key] = value;
  }
  const DatasetConfig dcfg = DatasetConfig::from_json(dataset_json);
  const Dataset dataset = dcfg.materialize();

  nlohmann::json reward_json = config.value("reward", nlohmann::json::object());
  if (!reward_json.contains("train")) reward_json["train"] = nlohmann::json::object();
  if (!reward_json["train"].contains("seed")) reward_json["train"]["seed"] = base_seed + 100;
  if (!reward_json["train"].contains("epochs"))
    reward_json["train"]["epochs"] = smoke ? 2 : (colors ? 12 : 16);
  const RewardStageConfig rcfg = RewardStageConfig::from_json(reward_json, dataset.feature_dim);

  nlohmann::json policy_json = config.value("policy", nlohmann::json::object());
  if (!policy_json.contains("train")) policy_json["train"] = nlohmann::json::object();
  if (!policy_json["train"].contains("seed")) policy_json["train"]["seed"] = base_seed + 200;
  if (smoke && !policy_json["train"].contains("epochs")) policy_json["train"]["epochs"] = 1;
  const PolicyStageConfig pcfg =
      PolicyStageConfig::from_json(policy_json, dataset.feature_dim);

  nlohmann::json classifier_json = config.value("classifier", nlohmann::json::object());
  if (smoke) {
    if (!classifier_json.contains("epochs")) classifier_json["epochs"] = 3;
    if (!classifier_json.contains("seeds"))
      classifier_json["seeds"] = std::vector<std::uint64_t>{base_seed + 300, base_seed + 301};
  } else if (!classifier_json.contains("seeds")) {
    classifier_json["seeds"] = std::vector<std::uint64_t>{base_seed + 300, base_seed + 301,
                                                          base_seed + 302, base_seed + 303,
                                                          base_seed + 304};
  }
  ClassifierStageConfig ccfg = ClassifierStageConfig::from_json(classifier_json);
  if (ccfg.readout.empty()) ccfg.readout = default_readout_for(dataset.name);

  nlohmann::json resolved = {{"experiment", experiment},
                             {"seed", base_seed},
                             {"dataset", dcfg.to_json()},
                             {"reward", rcfg.to_json()},
                             {"policy", pcfg.to_json()},
                             {"classifier", ccfg.to_json()}};
  prepare_out_dir(out_dir, resolved);

  const Split split = resolve_fold(dcfg.fixed_split_spec(), 0);

  // stage 1: reward model
  MatchingEncoder<float> reward_model(rcfg.arch);
  const RewardTrainResult reward_result =
      train_reward_model(reward_model, dataset, split.train, rcfg.train);
  reward_model.save((fs::path(out_dir) / "reward.ckpt").string(), reward_result.steps);
  write_epoch_csv((fs::path(out_dir) / "reward_loss.csv").string(), "loss",
                  reward_result.epoch_loss);

  // stage 2: augmentation policies
  PolicyModel<float> policy(pcfg.arch);
  const PolicyTrainResult policy_result =
      train_policy(policy, dataset, split.train, reward_model, pcfg.train);
  policy.save((fs::path(out_dir) / "policy.ckpt").string(), policy_result.updates);
  write_epoch_csv((fs::path(out_dir) / "reward_curve.csv").string(), "mean_reward",
                  policy_result.epoch_mean_reward);

  std::unique_ptr<PolicyModel<float>> category_only_policy;
  if (colors && !smoke) {
    PolicyConfig cat_cfg = pcfg.arch;
    cat_cfg.category_only = true;
    category_only_policy = std::make_unique<PolicyModel<float>>(cat_cfg);
    RLConfig cat_train = pcfg.train;
    cat_train.seed += 7;
    train_policy(*category_only_policy, dataset, split.train, reward_model, cat_train);
  }

  // stage 3: classifier arms
  struct Arm {
    std::string name;
    std::string mode;
    std::string kind;
    const PolicyModel<float>* policy = nullptr;
  };
  std::vector<Arm> arms;
  if (colors) {
    arms.push_back({"none", "none", "masknf", nullptr});
    arms.push_back({"uniform-masknf", "uniform", "masknf", nullptr});
    if (!smoke) arms.push_back({"gt-masknf", "gt", "masknf", nullptr});
    arms.push_back({"graphaug", "policy", "masknf", &policy});
    if (category_only_policy)
      arms.push_back({"graphaug-category-only", "policy", "masknf", category_only_policy.get()});
  } else {
    arms.push_back({"none", "none", "perturbedge", nullptr});
    arms.push_back({"uniform-perturbedge", "uniform", "perturbedge", nullptr});
    arms.push_back({"graphaug", "policy", "perturbedge", &policy});
  }

  EvalReport all;
  std::vector<std::pair<std::string, double>> table;
  nlohmann::json ordering = nlohmann::json::array();
  for (const Arm& arm : arms) {
    ClassifierStageConfig arm_cfg = ccfg;
    arm_cfg.augment_mode = arm.mode;
    arm_cfg.augment_kind = arm.kind;
    const AugmentSpec spec = build_augment_spec(arm_cfg, dataset, arm.policy);
    EvalReport report = run_fixed(dataset, split, arm_cfg, spec, arm.name);
    report.append_to(all);
    table.emplace_back(arm.name, report.mean);
    ordering.push_back({{"method", arm.name},
                        {"mean_accuracy", report.mean},
                        {"std_accuracy", report.stddev},
                        {"runs", report.entries.size()}});
  }
  all.finalize();
  all.write_csv((fs::path(out_dir) / "results.csv").string());

  {
    std::ofstream out((fs::path(out_dir) / "ordering_table.csv").string());
    check(out.good(), ErrorKind::Io, "cannot write ordering table");
    out << "method,mean_accuracy,std_accuracy\n";
    char buf[96];
    for (const auto& row : ordering) {
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f", row.at("method").get<std::string>().c_str(),
                    row.at("mean_accuracy").get<double>(), row.at("std_accuracy").get<double>());
      out << buf << "\n";
    }
  }

  nlohmann::json summary = {{"experiment", experiment},
                            {"dataset", dataset.name},
                            {"ordering", ordering},
                            {"reward_final_loss", reward_result.epoch_loss.back()},
                            {"policy_final_mean_reward", policy_result.epoch_mean_reward.back()}};

  if (!colors) {
    std::vector<int> probe_set(split.val.begin(),
                               split.val.begin() + std::min<std::size_t>(200, split.val.size()));
    const DropProbeResult probe = probe_drop_probabilities(policy, dataset, probe_set);
    summary["drop_probe"] = {{"mean_member", probe.mean_member},
                             {"mean_non_member", probe.mean_non_member},
                             {"member_nodes", probe.member_nodes},
                             {"non_member_nodes", probe.non_member_nodes}};
  }
  write_text((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");

  if (config.value("plots", false)) {
    write_svg_bars((fs::path(out_dir) / "accuracy_bars.svg").string(),
                   dataset.name + " mean test accuracy", table);
    write_svg_curve((fs::path(out_dir) / "reward_curve.svg").string(), "mean trajectory reward",
                    policy_result.epoch_mean_reward);
  }
}

void write_svg_bars(const std::string& path, const std::string& title,
                    const std::vector<std::pair<std::string, double>>& bars) {
  check_arg(!bars.empty(), "svg bars: no data");
  const int width = 120 * static_cast<int>(bars.size()) + 80;
  const int height = 320;
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n";
  out << "<text x='10' y='20' font-size='14'>" << title << "</text>\n";
  double max_v = 1e-9;
  for (const auto& [name, v] : bars) max_v = std::max(max_v, v);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = 240.0 * bars[i].second / max_v;
    const int x = 60 + static_cast<int>(i) * 120;
    out << "<rect x='" << x << "' y='" << 280.0 - h << "' width='80' height='" << h
        << "' fill='#4878cf'/>\n";
    out << "<text x='" << x << "' y='300' font-size='11'>" << bars[i].first << "</text>\n";
    out << "<text x='" << x << "' y='" << 272.0 - h << "' font-size='11'>" << bars[i].second
        << "</text>\n";
  }
  out << "</svg>\n";
}

void write_svg_curve(const std::string& path, const std::string& title,
                     const std::vector<double>& values) {
  check_arg(!values.empty(), "svg curve: no data");
  const int width = 560, height = 320;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n";
  out << "<text x='10' y='20' font-size='14'>" << title << "</text>\n";
  out << "<polyline fill='none' stroke='#4878cf' stroke-width='2' points='";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = 40.0 + 480.0 * (values.size() == 1 ? 0.5 : static_cast<double>(i) / (values.size() - 1));
    const double y = 280.0 - 240.0 * (values[i] - lo) / (hi - lo);
    out << x << "," << y << " ";
  }
  out << "'/>\n</svg>\n";
}

}  // namespace graphaug::experiments
