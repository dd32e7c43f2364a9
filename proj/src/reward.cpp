#include "graphaug/reward.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace graphaug {

template class MatchingEncoder<float>;
template class MatchingEncoder<double>;

MatchingConfig MatchingConfig::from_json(const nlohmann::json& j) {
  MatchingConfig cfg;
  cfg.feature_dim = j.at("feature_dim").get<int>();
  cfg.layers = j.value("layers", cfg.layers);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.cross_graph = j.value("cross_graph", cfg.cross_graph);
  cfg.readout = j.value("readout", cfg.readout);
  cfg.init_seed = j.value("init_seed", cfg.init_seed);
  return cfg;
}

nlohmann::json MatchingConfig::to_json() const {
  return {{"feature_dim", feature_dim}, {"layers", layers},   {"hidden", hidden},
          {"cross_graph", cross_graph}, {"readout", readout}, {"init_seed", init_seed}};
}

RewardTrainConfig RewardTrainConfig::from_json(const nlohmann::json& j) {
  RewardTrainConfig cfg;
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.pairs_per_epoch = j.value("pairs_per_epoch", cfg.pairs_per_epoch);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.max_pair_nodes = j.value("max_pair_nodes", cfg.max_pair_nodes);
  return cfg;
}

nlohmann::json RewardTrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"pairs_per_epoch", pairs_per_epoch},
          {"batch_size", batch_size},
          {"lr", lr},
          {"seed", seed},
          {"max_pair_nodes", max_pair_nodes}};
}

CrossGraphMessage cross_graph_message(const Eigen::VectorXd& h_v, const Eigen::MatrixXd& h_other) {
  check_arg(h_other.rows() >= 1, "cross_graph_message: empty other graph");
  check_arg(h_other.cols() == h_v.size(), "cross_graph_message: width mismatch");
  Eigen::VectorXd logits = h_other * h_v;
  const double m = logits.maxCoeff();
  Eigen::VectorXd w = (logits.array() - m).exp();
  w /= w.sum();
  CrossGraphMessage out;
  out.weights = w;
  out.message = Eigen::VectorXd::Zero(h_v.size());
  for (Eigen::Index i = 0; i < h_other.rows(); ++i)
    out.message += w(i) * (h_v - h_other.row(i).transpose());
  return out;
}

std::vector<PairSample> sample_pairs(const Dataset& dataset, const std::vector<int>& pool,
                                     int n_pairs, Rng& rng) {
  check_arg(n_pairs > 0, "sample_pairs: n_pairs must be positive");
  check_arg(pool.size() >= 2, "sample_pairs: pool too small");
  std::map<int, std::vector<int>> by_label;
  for (int i : pool) by_label[dataset.graphs[static_cast<std::size_t>(i)].label].push_back(i);
  check_arg(by_label.size() >= 2, "sample_pairs: need at least two labels in the pool");
  bool same_possible = false;
  for (const auto& [label, members] : by_label) {
    (void)label;
    if (members.size() >= 2) same_possible = true;
  }
  check_arg(same_possible, "sample_pairs: no label has two graphs");

  const int n_same = n_pairs - n_pairs / 2;  // odd counts favor positives
  std::vector<PairSample> out;
  out.reserve(static_cast<std::size_t>(n_pairs));
  const int n = static_cast<int>(pool.size());
  for (int k = 0; k < n_pairs; ++k) {
    const bool want_same = k < n_same;
    for (;;) {
      const int a = pool[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
      const int b = pool[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
      if (a == b) continue;
      const bool same = dataset.graphs[static_cast<std::size_t>(a)].label ==
                        dataset.graphs[static_cast<std::size_t>(b)].label;
      if (same != want_same) continue;
      out.push_back({a, b, same});
      break;
    }
  }
  return out;
}

RewardTrainResult train_reward_model(MatchingEncoder<float>& model, const Dataset& dataset,
                                     const std::vector<int>& pool, const RewardTrainConfig& cfg) {
  using nn::Var;
  check_arg(cfg.epochs >= 1 && cfg.batch_size >= 1, "train_reward_model: bad config");
  std::vector<int> usable;
  RewardTrainResult result;
  for (int i : pool) {
    if (dataset.graphs[static_cast<std::size_t>(i)].graph.num_nodes <= cfg.max_pair_nodes)
      usable.push_back(i);
    else
      ++result.skipped_large_graphs;
  }
  check_arg(usable.size() >= 2, "train_reward_model: too few graphs under the node cap");

  const int pairs_per_epoch =
      cfg.pairs_per_epoch > 0 ? cfg.pairs_per_epoch : static_cast<int>(usable.size());
  Rng rng(cfg.seed);
  nn::Adam<float> adam({cfg.lr});
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto pairs = sample_pairs(dataset, usable, pairs_per_epoch, rng);
    std::vector<int> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);

    double epoch_loss = 0.0;
    int epoch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      nn::Tape<float> tape;
      const auto bound = model.bind(tape, true);
      Var<float> loss;
      for (std::size_t k = start; k < end; ++k) {
        const PairSample& pr = pairs[static_cast<std::size_t>(order[k])];
        Var<float> s = model.forward(tape, bound, dataset.graphs[static_cast<std::size_t>(pr.first)].graph,
                                     dataset.graphs[static_cast<std::size_t>(pr.second)].graph);
        Var<float> sc = nn::clamp(s, static_cast<float>(kProbFloor), 1.0f - static_cast<float>(kProbFloor));
        Var<float> term = pr.same_label ? nn::log_(sc) : nn::log_(nn::one_minus(sc));
        loss = loss.valid() ? nn::add(loss, term) : term;
      }
      loss = nn::scale(loss, -1.0f / static_cast<float>(end - start));
      const double batch_loss = static_cast<double>(loss.value()(0, 0));
      check(std::isfinite(batch_loss), ErrorKind::Divergence, "train_reward_model: non-finite loss");
      if (result.steps == 0) result.first_batch_loss = batch_loss;
      tape.backward(loss.id);
      model.params().zero_grads();
      nn::harvest_grads(bound, model.params());
      adam.step(model.params());
      ++result.steps;
      epoch_loss += batch_loss * static_cast<double>(end - start);
      epoch_count += static_cast<int>(end - start);
    }
    result.epoch_loss.push_back(epoch_loss / epoch_count);
  }
  return result;
}

double evaluate_pairs(const MatchingEncoder<float>& model, const Dataset& dataset,
                      const std::vector<PairSample>& pairs, const std::string& csv_path) {
  check_arg(!pairs.empty(), "evaluate_pairs: no pairs");
  std::ofstream csv;
  if (!csv_path.empty()) {
    csv.open(csv_path);
    check(csv.good(), ErrorKind::Io, "evaluate_pairs: cannot open " + csv_path);
    csv << "pair,label_a,label_b,score,correct\n";
  }
  int correct = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    const auto& a = dataset.graphs[static_cast<std::size_t>(pr.first)];
    const auto& b = dataset.graphs[static_cast<std::size_t>(pr.second)];
    const double s = model.score(a.graph, b.graph);
    const bool ok = (s >= 0.5) == pr.same_label;
    correct += ok;
    if (csv.is_open())
      csv << i << "," << a.label << "," << b.label << "," << s << "," << (ok ? 1 : 0) << "\n";
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

}  // namespace graphaug
