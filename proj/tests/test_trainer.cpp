#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "graphaug/trainer.hpp"
#include "test_util.hpp"

using namespace graphaug;
using nn::Mat;
using nn::Tape;
using nn::Var;

namespace {

Dataset tiny_colors(int n, std::uint64_t seed) { return gen_colors(n, {4, 12}, seed); }

ClassifierTrainConfig small_classifier_config(const Dataset& d, const std::string& readout) {
  ClassifierTrainConfig cfg;
  cfg.arch.kind = ModelKind::Gin;
  cfg.arch.feature_dim = d.feature_dim;
  cfg.arch.layers = 2;
  cfg.arch.hidden = 32;
  cfg.arch.num_classes = d.num_classes;
  cfg.arch.readout = readout;
  cfg.epochs = 12;
  cfg.batch_size = 16;
  cfg.lr = 2e-3;
  cfg.seed = 5;
  cfg.arch.init_seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("reward_from_score clamp rules") {
  CHECK(reward_from_score(1.0) == 0.0);
  CHECK(reward_from_score(std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(reward_from_score(1e-12) == doctest::Approx(std::log(1e-7)).epsilon(1e-12));
  CHECK(reward_from_score(2.0) == 0.0);  // clamped from above
}

TEST_CASE("compute_reward is always finite and non-positive") {
  MatchingConfig cfg;
  cfg.feature_dim = 4;
  cfg.layers = 2;
  cfg.hidden = 16;
  MatchingEncoder<float> model(cfg);
  const Dataset d = tiny_colors(10, 101);
  for (int i = 0; i + 1 < d.size(); ++i) {
    const double r = compute_reward(d.graphs[static_cast<std::size_t>(i)].graph,
                                    d.graphs[static_cast<std::size_t>(i + 1)].graph, model);
    CHECK(std::isfinite(r));
    CHECK(r <= 0.0);
  }
}

TEST_CASE("reinforce: zero rewards leave parameters unchanged") {
  nn::ParamStore<float> params;
  params.add("theta", Mat<float>::Constant(1, 1, 0.4f));
  nn::Adam<float> adam({1e-2});

  Tape<float> tape;
  const auto bound = nn::bind_params(tape, params, true);
  Var<float> p = nn::sigmoid(bound[0]);
  Var<float> logp = nn::log_(nn::clamp(p, 1e-7f, 1.0f));
  const std::vector<TrajectoryGrad> batch = {{logp, 0.0}, {logp, 0.0}};
  reinforce_update(tape, batch, params, bound, adam);
  CHECK(params.values[0](0, 0) == 0.4f);
}

TEST_CASE("reinforce: doubling rewards doubles the gradient exactly") {
  const auto grad_for = [](double reward) {
    nn::ParamStore<float> params;
    params.add("theta", Mat<float>::Constant(1, 1, 0.3f));
    Tape<float> tape;
    const auto bound = nn::bind_params(tape, params, true);
    Var<float> p = nn::sigmoid(bound[0]);
    Var<float> logp = nn::log_(nn::clamp(p, 1e-7f, 1.0f));
    reinforce_backward(tape, {{logp, reward}}, params, bound);
    return params.grads[0](0, 0);
  };
  CHECK(grad_for(-2.0) == doctest::Approx(2.0f * grad_for(-1.0)).epsilon(1e-6));
}

TEST_CASE("reinforce estimator is unbiased on the one-Bernoulli toy") {
  // policy: p = sigmoid(theta); reward 1 if the coin comes up 1, else 0.
  // exact gradient of E[R] wrt theta: p(1-p).
  const double theta = 0.3;
  const double p = 1.0 / (1.0 + std::exp(-theta));
  const double exact = p * (1.0 - p);

  Rng rng(103);
  const int total = 100000, batch_size = 1000;
  double grad_sum = 0.0;
  for (int b = 0; b < total / batch_size; ++b) {
    nn::ParamStore<float> params;
    params.add("theta", Mat<float>::Constant(1, 1, static_cast<float>(theta)));
    Tape<float> tape;
    const auto bound = nn::bind_params(tape, params, true);
    Var<float> pv = nn::sigmoid(bound[0]);
    std::vector<TrajectoryGrad> batch;
    batch.reserve(batch_size);
    for (int i = 0; i < batch_size; ++i) {
      const bool o = rng.bernoulli(p);
      Mat<float> ov = Mat<float>::Constant(1, 1, o ? 1.0f : 0.0f);
      Var<float> oc = nn::constant(tape, ov);
      Var<float> pc = nn::clamp(pv, 1e-7f, 1.0f - 1e-7f);
      Var<float> logp = nn::add(nn::cmul(oc, nn::log_(pc)),
                                nn::cmul(nn::one_minus(oc), nn::log_(nn::one_minus(pc))));
      batch.push_back({logp, o ? 1.0 : 0.0});
    }
    reinforce_backward(tape, batch, params, bound);
    // loss = -mean(R * logp), so the ascent gradient is the negation
    grad_sum += -static_cast<double>(params.grads[0](0, 0)) * batch_size;
  }
  const double estimate = grad_sum / total;
  CHECK(std::abs(estimate - exact) / exact < 0.05);
}

TEST_CASE("train_policy runs deterministically and rewards stay non-positive") {
  const Dataset d = gen_triangles(40, {8, 14}, 104);
  MatchingConfig rcfg;
  rcfg.feature_dim = d.feature_dim;
  rcfg.layers = 2;
  rcfg.hidden = 16;
  const MatchingEncoder<float> reward_model(rcfg);

  PolicyConfig pcfg;
  pcfg.feature_dim = d.feature_dim;
  pcfg.encoder_layers = 2;
  pcfg.hidden = 16;
  pcfg.head_hidden = 16;
  PolicyModel<float> policy_a(pcfg);
  PolicyModel<float> policy_b(pcfg);

  std::vector<int> pool;
  for (int i = 0; i < d.size(); ++i) pool.push_back(i);
  RLConfig cfg;
  cfg.steps = 3;
  cfg.batch_size = 16;
  cfg.epochs = 2;
  cfg.seed = 105;

  const PolicyTrainResult ra = train_policy(policy_a, d, pool, reward_model, cfg);
  const PolicyTrainResult rb = train_policy(policy_b, d, pool, reward_model, cfg);
  CHECK(ra.epoch_mean_reward == rb.epoch_mean_reward);
  for (double r : ra.epoch_mean_reward) {
    CHECK(std::isfinite(r));
    CHECK(r <= 0.0);
  }
  CHECK(ra.updates == 2 * 3);  // ceil(40/16) batches x 2 epochs

  SUBCASE("moving baseline variant also runs") {
    PolicyModel<float> policy_c(pcfg);
    RLConfig with_baseline = cfg;
    with_baseline.moving_baseline = true;
    const PolicyTrainResult rc = train_policy(policy_c, d, pool, reward_model, with_baseline);
    CHECK(rc.epoch_mean_reward.size() == 2);
  }
}

TEST_CASE("train_classifier: control arm is deterministic and never augments eval graphs") {
  const Dataset d = tiny_colors(140, 106);
  const Split split = resolve_fold(fixed_split(100, 20, 20), 0);
  ClassifierTrainConfig cfg = small_classifier_config(d, "sum");

  const RunResult a = train_classifier(d, split, cfg);
  const RunResult b = train_classifier(d, split, cfg);
  CHECK(a.test_acc == b.test_acc);
  CHECK(a.val_acc == b.val_acc);
  CHECK(a.train_loss == b.train_loss);
  CHECK(a.augment_calls == static_cast<long>(cfg.epochs) * 100);  // training graphs only
}

TEST_CASE("train_classifier learns an easy task above chance") {
  const Dataset d = tiny_colors(240, 107);
  const Split split = resolve_fold(fixed_split(180, 30, 30), 0);
  ClassifierTrainConfig cfg = small_classifier_config(d, "sum");  // sum readout makes counting easy
  const RunResult run = train_classifier(d, split, cfg);
  CHECK(run.best_val_acc > 0.4);  // ten classes, chance well below 0.2
  CHECK(run.best_epoch >= 0);
  CHECK(run.val_acc.size() == static_cast<std::size_t>(cfg.epochs));
}

TEST_CASE("train_classifier with each augmentation mode runs end to end") {
  const Dataset d = tiny_colors(60, 108);
  const Split split = resolve_fold(fixed_split(40, 10, 10), 0);
  ClassifierTrainConfig cfg = small_classifier_config(d, "max");
  cfg.epochs = 2;

  SUBCASE("uniform") {
    cfg.augment.mode = AugmentSpec::Mode::Uniform;
    cfg.augment.kind = TransformKind::DropNode;
    const RunResult run = train_classifier(d, split, cfg);
    CHECK(run.augment_calls == 80);
  }
  SUBCASE("gt") {
    cfg.augment.mode = AugmentSpec::Mode::Gt;
    cfg.augment.kind = TransformKind::MaskNF;
    cfg.augment.dataset_kind = DatasetKind::Colors;
    CHECK(train_classifier(d, split, cfg).augment_calls == 80);
  }
  SUBCASE("policy") {
    PolicyConfig pcfg;
    pcfg.feature_dim = d.feature_dim;
    pcfg.encoder_layers = 1;
    pcfg.hidden = 8;
    pcfg.head_hidden = 8;
    const PolicyModel<float> policy(pcfg);
    cfg.augment.mode = AugmentSpec::Mode::Policy;
    cfg.augment.policy = &policy;
    cfg.augment.steps = 2;
    const RunResult run = train_classifier(d, split, cfg);
    CHECK(run.augment_calls == 80);
  }
  SUBCASE("gcn model kind") {
    cfg.arch.kind = ModelKind::Gcn;
    CHECK(train_classifier(d, split, cfg).val_acc.size() == 2);
  }
}

TEST_CASE("eval report: stored std matches recomputation within 1e-9") {
  EvalReport report;
  Rng rng(109);
  for (int i = 0; i < 30; ++i)
    report.entries.push_back({"m", "d", "gin", i % 10, 1, rng.uniform(0.3, 0.9)});
  report.finalize();
  CHECK(std::abs(report.stddev - report.compute_stddev()) < 1e-9);
  CHECK(std::abs(report.mean - report.compute_mean()) < 1e-9);

  const auto path = std::filesystem::temp_directory_path() / "graphaug_report.csv";
  report.write_csv(path.string());
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 31);
  std::filesystem::remove(path);
}

TEST_CASE("run_cv produces repeats x folds entries") {
  const Dataset d = tiny_colors(60, 110);
  ClassifierTrainConfig cfg = small_classifier_config(d, "sum");
  cfg.epochs = 1;
  cfg.arch.hidden = 8;
  cfg.arch.layers = 1;
  const EvalReport report = run_cv(d, "none", cfg, 10, 3, 111);
  CHECK(report.entries.size() == 30);
  CHECK(report.mean > 0.0);
}

TEST_CASE("run_cv smoke on the MUTAG-style fixture") {
  const Dataset d = parse_tu_dataset(std::string(GRAPHAUG_TEST_DATA_DIR) + "/mutag_mini");
  ClassifierTrainConfig cfg;
  cfg.arch.kind = ModelKind::Gin;
  cfg.arch.feature_dim = d.feature_dim;
  cfg.arch.layers = 1;
  cfg.arch.hidden = 8;
  cfg.arch.num_classes = d.num_classes;
  cfg.arch.readout = "mean";
  cfg.epochs = 2;
  cfg.batch_size = 4;
  const EvalReport report = run_cv(d, "none", cfg, 3, 2, 112);
  CHECK(report.entries.size() == 6);
}

TEST_CASE("probe_drop_probabilities separates member and non-member nodes") {
  const Dataset d = gen_triangles(20, {8, 16}, 113);
  PolicyConfig pcfg;
  pcfg.feature_dim = d.feature_dim;
  pcfg.encoder_layers = 1;
  pcfg.hidden = 8;
  pcfg.head_hidden = 8;
  const PolicyModel<float> policy(pcfg);
  std::vector<int> idx;
  for (int i = 0; i < d.size(); ++i) idx.push_back(i);
  const DropProbeResult probe = probe_drop_probabilities(policy, d, idx);
  CHECK(probe.member_nodes > 0);
  CHECK(probe.non_member_nodes > 0);
  CHECK(probe.mean_member > 0.0);
  CHECK(probe.mean_member < 1.0);
  CHECK(probe.mean_non_member > 0.0);
  CHECK(probe.mean_non_member < 1.0);
}
