#include "graphaug/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace graphaug {

ModelKind parse_model_kind(const std::string& s) {
  if (s == "gin") return ModelKind::Gin;
  if (s == "gcn") return ModelKind::Gcn;
  fail(ErrorKind::InvalidArgument, "bad model kind '" + s + "' (want gin|gcn)");
}

std::string model_kind_name(ModelKind k) { return k == ModelKind::Gin ? "gin" : "gcn"; }

GraphBatch make_batch(const std::vector<const Graph*>& graphs, const std::vector<int>& labels,
                      ModelKind kind) {
  check_arg(!graphs.empty() && graphs.size() == labels.size(), "make_batch: bad inputs");
  GraphBatch batch;
  batch.n_graphs = static_cast<int>(graphs.size());
  batch.labels = labels;
  int total = 0;
  for (const Graph* g : graphs) {
    check_arg(g->num_nodes >= 1, "make_batch: empty graph");
    total += g->num_nodes;
  }
  batch.features.resize(total, graphs[0]->feature_dim());
  batch.segment.resize(static_cast<std::size_t>(total));
  if (kind == ModelKind::Gin) {
    batch.adj = std::make_shared<nn::RowPairs>();
    batch.adj->out_rows = total;
  } else {
    batch.norm_adj = std::make_shared<nn::WeightedRowPairs>();
    batch.norm_adj->out_rows = total;
  }
  int offset = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = *graphs[gi];
    batch.features.middleRows(offset, g.num_nodes) = g.features;
    for (int v = 0; v < g.num_nodes; ++v) batch.segment[static_cast<std::size_t>(offset + v)] = static_cast<int>(gi);
    if (kind == ModelKind::Gin) {
      for (const Edge& e : g.edges) {
        batch.adj->src.push_back(offset + e.first);
        batch.adj->dst.push_back(offset + e.second);
        batch.adj->src.push_back(offset + e.second);
        batch.adj->dst.push_back(offset + e.first);
      }
    } else {
      const auto local = nn::normalized_adjacency_pairs(g);
      for (std::size_t k = 0; k < local->src.size(); ++k) {
        batch.norm_adj->src.push_back(offset + local->src[k]);
        batch.norm_adj->dst.push_back(offset + local->dst[k]);
        batch.norm_adj->weight.push_back(local->weight[k]);
      }
    }
    offset += g.num_nodes;
  }
  return batch;
}

GraphClassifier::GraphClassifier(const ClassifierArch& arch) : arch_(arch) {
  check_arg(arch.feature_dim >= 1 && arch.num_classes >= 2 && arch.layers >= 1,
            "classifier: bad architecture");
  Rng rng(arch.init_seed);
  int in = arch.feature_dim;
  for (int l = 0; l < arch.layers; ++l) {
    if (arch.kind == ModelKind::Gin)
      gin_layers_.emplace_back(store_, "cls.l" + std::to_string(l), in, arch.hidden, rng);
    else
      gcn_layers_.emplace_back(store_, "cls.l" + std::to_string(l), in, arch.hidden, rng);
    in = arch.hidden;
  }
  head_ = nn::Mlp<float>(store_, "cls.head", {arch.hidden, arch.hidden, arch.num_classes},
                         nn::OutputActivation::None, rng);
  readout_ = nn::parse_readout(arch.readout);
}

nn::Var<float> GraphClassifier::forward(nn::Tape<float>& tape,
                                        const std::vector<nn::Var<float>>& bound,
                                        const GraphBatch& batch) const {
  nn::Var<float> h = nn::constant(tape, nn::Mat<float>(batch.features));
  if (arch_.kind == ModelKind::Gin)
    for (const auto& layer : gin_layers_) h = layer.forward(bound, h, batch.adj);
  else
    for (const auto& layer : gcn_layers_) h = layer.forward(bound, h, batch.norm_adj);
  nn::Var<float> pooled = nn::segment_readout(h, batch.segment, batch.n_graphs, readout_);
  return head_.forward(bound, pooled);
}

double GraphClassifier::accuracy(const Dataset& dataset, const std::vector<int>& indices,
                                 int batch_size) const {
  check_arg(!indices.empty(), "accuracy: no graphs");
  int correct = 0;
  for (std::size_t start = 0; start < indices.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(indices.size(), start + static_cast<std::size_t>(batch_size));
    std::vector<const Graph*> graphs;
    std::vector<int> labels;
    for (std::size_t i = start; i < end; ++i) {
      graphs.push_back(&dataset.graphs[static_cast<std::size_t>(indices[i])].graph);
      labels.push_back(dataset.graphs[static_cast<std::size_t>(indices[i])].label);
    }
    const GraphBatch batch = make_batch(graphs, labels, arch_.kind);
    nn::Tape<float> tape;
    const auto bound = bind(tape, false);
    const auto logits = forward(tape, bound, batch).value();
    for (int r = 0; r < batch.n_graphs; ++r) {
      Eigen::Index argmax;
      logits.row(r).maxCoeff(&argmax);
      correct += (static_cast<int>(argmax) == batch.labels[static_cast<std::size_t>(r)] - 1);
    }
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

AugmentSpec::Mode AugmentSpec::parse_mode(const std::string& s) {
  if (s == "none") return Mode::None;
  if (s == "uniform") return Mode::Uniform;
  if (s == "gt") return Mode::Gt;
  if (s == "policy") return Mode::Policy;
  fail(ErrorKind::InvalidArgument, "bad augmentation mode '" + s + "' (want none|uniform|gt|policy)");
}

std::string AugmentSpec::mode_name(Mode m) {
  switch (m) {
    case Mode::None: return "none";
    case Mode::Uniform: return "uniform";
    case Mode::Gt: return "gt";
    case Mode::Policy: return "policy";
  }
  return "?";
}

Graph augment_graph(const Graph& g, const AugmentSpec& spec, Rng& rng) {
  switch (spec.mode) {
    case AugmentSpec::Mode::None: return g;
    case AugmentSpec::Mode::Uniform:
      switch (spec.kind) {
        case TransformKind::MaskNF: return uniform_mask_nf(g, spec.rate, rng);
        case TransformKind::DropNode: return uniform_drop_node(g, spec.rate, rng);
        case TransformKind::PerturbEdge: return uniform_perturb_edge(g, spec.rate, rng);
        case TransformKind::DropEdge: return uniform_drop_edge(g, spec.rate, rng);
      }
      break;
    case AugmentSpec::Mode::Gt:
      return gt_transform(spec.dataset_kind, spec.kind, g, spec.rate, rng);
    case AugmentSpec::Mode::Policy: {
      check_arg(spec.policy != nullptr, "augment_graph: policy mode without a policy");
      const double cap = spec.apply_cap ? spec.cap : 0.0;
      return spec.policy->augment(g, spec.steps, cap, rng).final_graph;
    }
  }
  fail(ErrorKind::Internal, "augment_graph: bad mode");
}

double reward_from_score(double s) { return std::log(std::min(std::max(s, kProbFloor), 1.0)); }

double compute_reward(const Graph& g0, const Graph& gT, const MatchingEncoder<float>& reward_model) {
  return reward_from_score(reward_model.score(g0, gT));
}

ReinforceStats reinforce_backward(nn::Tape<float>& tape, const std::vector<TrajectoryGrad>& batch,
                                  nn::ParamStore<float>& params,
                                  const std::vector<nn::Var<float>>& bound, double baseline) {
  check_arg(!batch.empty(), "reinforce: empty batch");
  ReinforceStats stats;
  nn::Var<float> loss;
  for (const auto& t : batch) {
    stats.mean_reward += t.reward;
    nn::Var<float> term = nn::scale(t.total_log_prob, -static_cast<float>(t.reward - baseline));
    loss = loss.valid() ? nn::add(loss, term) : term;
  }
  stats.mean_reward /= static_cast<double>(batch.size());
  loss = nn::scale(loss, 1.0f / static_cast<float>(batch.size()));
  stats.loss = static_cast<double>(loss.value()(0, 0));
  check(std::isfinite(stats.loss), ErrorKind::Divergence, "reinforce: non-finite loss");
  tape.backward(loss.id);
  params.zero_grads();
  nn::harvest_grads(bound, params);
  return stats;
}

ReinforceStats reinforce_update(nn::Tape<float>& tape, const std::vector<TrajectoryGrad>& batch,
                                nn::ParamStore<float>& params,
                                const std::vector<nn::Var<float>>& bound, nn::Adam<float>& adam,
                                double baseline) {
  const ReinforceStats stats = reinforce_backward(tape, batch, params, bound, baseline);
  adam.step(params);
  return stats;
}

RLConfig RLConfig::from_json(const nlohmann::json& j) {
  RLConfig cfg;
  cfg.steps = j.value("steps", cfg.steps);
  cfg.cap = j.value("cap", cfg.cap);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.moving_baseline = j.value("moving_baseline", cfg.moving_baseline);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

nlohmann::json RLConfig::to_json() const {
  return {{"steps", steps},   {"cap", cap},
          {"batch_size", batch_size}, {"lr", lr},
          {"epochs", epochs}, {"moving_baseline", moving_baseline},
          {"seed", seed}};
}

PolicyTrainResult train_policy(PolicyModel<float>& policy, const Dataset& dataset,
                               const std::vector<int>& pool,
                               const MatchingEncoder<float>& reward_model, const RLConfig& cfg) {
  check_arg(cfg.steps >= 1 && cfg.cap >= 0.0 && cfg.cap <= 1.0, "train_policy: bad config");
  check_arg(!pool.empty(), "train_policy: empty pool");
  PolicyTrainResult result;
  Rng rng(cfg.seed);
  nn::Adam<float> adam({cfg.lr});
  double baseline = 0.0;
  bool baseline_ready = false;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<int> order = pool;
    rng.shuffle(order);
    double epoch_reward = 0.0;
    long epoch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      nn::Tape<float> tape;
      const auto bound = policy.bind(tape, true);
      std::vector<TrajectoryGrad> batch;
      for (std::size_t k = start; k < end; ++k) {
        const Graph& g0 = dataset.graphs[static_cast<std::size_t>(order[k])].graph;
        auto rollout = policy.rollout(tape, bound, g0, cfg.steps, cfg.cap, rng);
        nn::Var<float> total;
        for (const auto& step : rollout.steps)
          total = total.valid() ? nn::add(total, step.log_prob) : step.log_prob;
        const double reward =
            compute_reward(rollout.trajectory.initial, rollout.trajectory.final_graph, reward_model);
        batch.push_back({total, reward});
      }
      const double b = cfg.moving_baseline && baseline_ready ? baseline : 0.0;
      const ReinforceStats stats = reinforce_update(tape, batch, policy.params(), bound, adam, b);
      if (cfg.moving_baseline) {
        baseline = baseline_ready ? 0.9 * baseline + 0.1 * stats.mean_reward : stats.mean_reward;
        baseline_ready = true;
      }
      epoch_reward += stats.mean_reward * static_cast<double>(batch.size());
      epoch_count += static_cast<long>(batch.size());
      ++result.updates;
    }
    result.epoch_mean_reward.push_back(epoch_reward / static_cast<double>(epoch_count));
  }
  return result;
}

RunResult train_classifier(const Dataset& dataset, const Split& split,
                           const ClassifierTrainConfig& cfg) {
  check_arg(!split.train.empty() && !split.val.empty() && !split.test.empty(),
            "train_classifier: empty split part");
  GraphClassifier model(cfg.arch);
  nn::Adam<float> adam({cfg.lr});
  Rng rng(cfg.seed + 1);

  RunResult result;
  std::vector<nn::Mat<float>> best_params = model.params().values;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<int> order = split.train;
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<Graph> augmented;
      std::vector<const Graph*> graphs;
      std::vector<int> labels;
      augmented.reserve(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const auto& lg = dataset.graphs[static_cast<std::size_t>(order[k])];
        augmented.push_back(augment_graph(lg.graph, cfg.augment, rng));
        ++result.augment_calls;
        labels.push_back(lg.label);
      }
      for (const Graph& g : augmented) graphs.push_back(&g);
      const GraphBatch batch = make_batch(graphs, labels, cfg.arch.kind);
      nn::Tape<float> tape;
      const auto bound = model.bind(tape, true);
      nn::Var<float> logits = model.forward(tape, bound, batch);
      nn::Var<float> logp = nn::log_softmax_rows(logits);
      std::vector<std::pair<int, int>> coords;
      coords.reserve(batch.labels.size());
      for (std::size_t i = 0; i < batch.labels.size(); ++i)
        coords.emplace_back(static_cast<int>(i), batch.labels[i] - 1);
      nn::Var<float> loss =
          nn::scale(nn::sum_all(nn::gather_elems(logp, std::move(coords))),
                    -1.0f / static_cast<float>(batch.n_graphs));
      const double batch_loss = static_cast<double>(loss.value()(0, 0));
      check(std::isfinite(batch_loss), ErrorKind::Divergence, "train_classifier: non-finite loss");
      tape.backward(loss.id);
      model.params().zero_grads();
      nn::harvest_grads(bound, model.params());
      adam.step(model.params());
      epoch_loss += batch_loss * static_cast<double>(end - start);
    }
    result.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));

    const double val = model.accuracy(dataset, split.val);
    result.val_acc.push_back(val);
    if (val > result.best_val_acc || result.best_epoch < 0) {
      result.best_val_acc = val;
      result.best_epoch = epoch;
      best_params = model.params().values;
    }
  }
  model.params().values = best_params;
  result.test_acc = model.accuracy(dataset, split.test);
  return result;
}

double EvalReport::compute_mean() const {
  check_arg(!entries.empty(), "eval report: empty");
  double s = 0.0;
  for (const auto& e : entries) s += e.accuracy;
  return s / static_cast<double>(entries.size());
}

double EvalReport::compute_stddev() const {
  const double m = compute_mean();
  double s = 0.0;
  for (const auto& e : entries) s += (e.accuracy - m) * (e.accuracy - m);
  return std::sqrt(s / static_cast<double>(entries.size()));
}

void EvalReport::finalize() {
  mean = compute_mean();
  stddev = compute_stddev();
}

void EvalReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "eval report: cannot open " + path);
  out << "method,dataset,model,fold,seed,accuracy\n";
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.6f", e.accuracy);
    out << e.method << "," << e.dataset << "," << e.model << "," << e.fold << "," << e.seed << ","
        << buf << "\n";
  }
}

void EvalReport::append_to(EvalReport& other) const {
  other.entries.insert(other.entries.end(), entries.begin(), entries.end());
}

EvalReport run_cv(const Dataset& dataset, const std::string& method_name,
                  const ClassifierTrainConfig& base_cfg, int folds, int repeats,
                  std::uint64_t base_seed) {
  EvalReport report;
  const auto labels = dataset.labels();
  for (int rep = 0; rep < repeats; ++rep) {
    const SplitSpec spec = kfold_splits(labels, folds, base_seed + static_cast<std::uint64_t>(rep));
    for (int fold = 0; fold < folds; ++fold) {
      const Split split = resolve_fold(spec, fold);
      ClassifierTrainConfig cfg = base_cfg;
      cfg.seed = base_seed + static_cast<std::uint64_t>(rep * folds + fold) * 1000;
      cfg.arch.init_seed = cfg.seed;
      const RunResult run = train_classifier(dataset, split, cfg);
      report.entries.push_back({method_name, dataset.name, model_kind_name(cfg.arch.kind), fold,
                                base_seed + static_cast<std::uint64_t>(rep), run.test_acc});
    }
  }
  report.finalize();
  return report;
}

DropProbeResult probe_drop_probabilities(const PolicyModel<float>& policy, const Dataset& dataset,
                                         const std::vector<int>& indices) {
  DropProbeResult out;
  double sum_member = 0.0, sum_other = 0.0;
  for (int i : indices) {
    const Graph& g = dataset.graphs[static_cast<std::size_t>(i)].graph;
    const auto member = nodes_in_triangles(g);
    const Eigen::VectorXf probs = policy.drop_probabilities(g);
    for (int v = 0; v < g.num_nodes; ++v) {
      if (member[v]) {
        sum_member += probs(v);
        ++out.member_nodes;
      } else {
        sum_other += probs(v);
        ++out.non_member_nodes;
      }
    }
  }
  check_arg(out.member_nodes > 0 && out.non_member_nodes > 0,
            "probe: need both member and non-member nodes in the probe set");
  out.mean_member = sum_member / static_cast<double>(out.member_nodes);
  out.mean_non_member = sum_other / static_cast<double>(out.non_member_nodes);
  return out;
}

}  // namespace graphaug
