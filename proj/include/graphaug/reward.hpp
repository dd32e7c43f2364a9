#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "graphaug/dataset.hpp"
#include "graphaug/nn/optim.hpp"

namespace graphaug {

struct MatchingConfig {
  int feature_dim = 0;
  int layers = 3;
  int hidden = 128;
  bool cross_graph = true;  // ablation: disable Eq.-style cross-graph messages
  std::string readout = "sum";
  std::uint64_t init_seed = 1;

  static MatchingConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Graph matching network scoring the probability that two graphs share a
// label. Both graphs are processed by the same (shared) parameters; each
// layer combines GIN-style within-graph aggregation with an attention-based
// cross-graph message, and the score is a sigmoid MLP over the element-wise
// absolute deviation of the two readouts.
template <typename T>
class MatchingEncoder {
 public:
  using Tape = nn::Tape<T>;
  using Var = nn::Var<T>;

  explicit MatchingEncoder(const MatchingConfig& cfg) : cfg_(cfg) {
    check_arg(cfg.feature_dim >= 1, "matching: feature_dim must be >= 1");
    check_arg(cfg.layers >= 1, "matching: need at least one layer");
    Rng rng(cfg.init_seed);
    embed_w_ = store_.add("match.embed.w", nn::glorot<T>(cfg.feature_dim, cfg.hidden, rng));
    embed_b_ = store_.add("match.embed.b", nn::Mat<T>::Zero(1, cfg.hidden));
    const int update_in = cfg.cross_graph ? 2 * cfg.hidden : cfg.hidden;
    for (int l = 0; l < cfg.layers; ++l) {
      eps_ids_.push_back(store_.add("match.l" + std::to_string(l) + ".eps", nn::Mat<T>::Zero(1, 1)));
      update_mlps_.emplace_back(store_, "match.l" + std::to_string(l) + ".update",
                                std::vector<int>{update_in, cfg.hidden, cfg.hidden},
                                nn::OutputActivation::None, rng);
    }
    out_mlp_ = nn::Mlp<T>(store_, "match.out", {cfg.hidden, cfg.hidden, 1},
                          nn::OutputActivation::Sigmoid, rng);
    // the score head's last layer starts at zero so untrained scores sit at
    // 0.5 instead of saturating on sum-pooled readouts
    store_.values[static_cast<std::size_t>(store_.find("match.out.w1"))].setZero();
    readout_ = nn::parse_readout(cfg.readout);
  }

  const MatchingConfig& config() const { return cfg_; }
  nn::ParamStore<T>& params() { return store_; }
  const nn::ParamStore<T>& params() const { return store_; }

  std::vector<Var> bind(Tape& tape, bool with_grad) const {
    return nn::bind_params(tape, store_, with_grad);
  }

  // Same-label probability s(g1, g2) in (0, 1).
  Var forward(Tape& tape, const std::vector<Var>& bound, const Graph& g1, const Graph& g2) const {
    check_arg(g1.num_nodes >= 1 && g2.num_nodes >= 1, "matching: empty graph");
    check_arg(g1.feature_dim() == cfg_.feature_dim && g2.feature_dim() == cfg_.feature_dim,
              "matching: feature dim mismatch");
    const auto adj1 = nn::adjacency_pairs(g1);
    const auto adj2 = nn::adjacency_pairs(g2);
    Var h1 = embed(tape, bound, g1);
    Var h2 = embed(tape, bound, g2);
    for (int l = 0; l < cfg_.layers; ++l) {
      Var w1 = within(bound, l, h1, adj1);
      Var w2 = within(bound, l, h2, adj2);
      Var in1 = w1, in2 = w2;
      if (cfg_.cross_graph) {
        // mu_v = h_v - sum_i w_iv h_i with attention over the other graph
        Var att12 = nn::softmax_rows(nn::matmul_bt(h1, h2));
        Var att21 = nn::softmax_rows(nn::matmul_bt(h2, h1));
        Var mu1 = nn::sub(h1, nn::matmul(att12, h2));
        Var mu2 = nn::sub(h2, nn::matmul(att21, h1));
        in1 = nn::concat_cols(w1, mu1);
        in2 = nn::concat_cols(w2, mu2);
      }
      h1 = update_mlps_[static_cast<std::size_t>(l)].forward(bound, in1);
      h2 = update_mlps_[static_cast<std::size_t>(l)].forward(bound, in2);
    }
    Var r1 = nn::readout(h1, readout_);
    Var r2 = nn::readout(h2, readout_);
    Var diff = nn::abs_(nn::sub(r1, r2));
    return out_mlp_.forward(bound, diff);
  }

  // No-grad convenience score.
  double score(const Graph& g1, const Graph& g2) const {
    Tape tape;
    const auto bound = bind(tape, false);
    return static_cast<double>(forward(tape, bound, g1, g2).value()(0, 0));
  }

  void save(const std::string& path, int step_count) const {
    nlohmann::json meta = {{"kind", "reward"},
                           {"config", cfg_.to_json()},
                           {"seed", cfg_.init_seed},
                           {"step_count", step_count}};
    nn::save_checkpoint(store_, meta.dump(), path);
  }

  static MatchingEncoder load(const std::string& path) {
    const nn::Checkpoint ckpt = nn::load_checkpoint_raw(path);
    const auto meta = nlohmann::json::parse(ckpt.metadata_json);
    check(meta.value("kind", "") == "reward", ErrorKind::Parse,
          "checkpoint at " + path + " is not a reward-model checkpoint");
    MatchingEncoder model(MatchingConfig::from_json(meta.at("config")));
    nn::restore_params(model.store_, ckpt);
    return model;
  }

 private:
  Var embed(Tape& tape, const std::vector<Var>& bound, const Graph& g) const {
    Var x = nn::constant(tape, nn::Mat<T>(g.features.cast<T>()));
    return nn::add_rowvec(nn::matmul(x, bound[embed_w_]), bound[embed_b_]);
  }

  Var within(const std::vector<Var>& bound, int layer, Var h,
             const std::shared_ptr<const nn::RowPairs>& adj) const {
    Var agg = nn::pair_accumulate(h, adj);
    return nn::add(nn::add(h, nn::scale_var(h, bound[eps_ids_[static_cast<std::size_t>(layer)]])), agg);
  }

  MatchingConfig cfg_;
  nn::ParamStore<T> store_;
  int embed_w_ = -1, embed_b_ = -1;
  std::vector<int> eps_ids_;
  std::vector<nn::Mlp<T>> update_mlps_;
  nn::Mlp<T> out_mlp_;
  nn::Readout readout_ = nn::Readout::Sum;
};

extern template class MatchingEncoder<float>;
extern template class MatchingEncoder<double>;

// Attention-based cross-graph message for a single node embedding h_v against
// the other graph's embeddings: weights w_i softmax over dot products,
// message = sum_i w_i (h_v - h_i). Value-level reference used by tests.
struct CrossGraphMessage {
  Eigen::VectorXd weights;
  Eigen::VectorXd message;
};
CrossGraphMessage cross_graph_message(const Eigen::VectorXd& h_v, const Eigen::MatrixXd& h_other);

// Balanced same-label / different-label pair samples (indices into a dataset).
struct PairSample {
  int first = 0;
  int second = 0;
  bool same_label = false;
};

std::vector<PairSample> sample_pairs(const Dataset& dataset, const std::vector<int>& pool,
                                     int n_pairs, Rng& rng);

struct RewardTrainConfig {
  int epochs = 10;
  int pairs_per_epoch = 0;  // 0: one pair per pool graph
  int batch_size = 32;
  double lr = 1e-4;
  std::uint64_t seed = 7;
  int max_pair_nodes = 200;  // graphs above this are not paired (documented skips)

  static RewardTrainConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RewardTrainResult {
  std::vector<double> epoch_loss;
  double first_batch_loss = 0.0;  // before any update; ~ln 2 at initialization
  int skipped_large_graphs = 0;
  int steps = 0;
};

// Trains the matching encoder with binary cross entropy on balanced pairs
// drawn from `pool` (training indices). The caller freezes the model after.
RewardTrainResult train_reward_model(MatchingEncoder<float>& model, const Dataset& dataset,
                                     const std::vector<int>& pool, const RewardTrainConfig& cfg);

// Mean classification accuracy (s >= 0.5 vs same_label) on given pairs; also
// writes a CSV report (pair id, labels, s, correct) when csv_path non-empty.
double evaluate_pairs(const MatchingEncoder<float>& model, const Dataset& dataset,
                      const std::vector<PairSample>& pairs, const std::string& csv_path = "");

}  // namespace graphaug
