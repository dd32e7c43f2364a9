#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "graphaug/dataset.hpp"
#include "graphaug/policy.hpp"
#include "graphaug/reward.hpp"

namespace graphaug {

// --- graph classifier -------------------------------------------------------

enum class ModelKind { Gin, Gcn };
ModelKind parse_model_kind(const std::string& s);
std::string model_kind_name(ModelKind k);

struct ClassifierArch {
  ModelKind kind = ModelKind::Gin;
  int feature_dim = 0;
  int layers = 3;
  int hidden = 64;
  int num_classes = 0;
  std::string readout = "mean";
  std::uint64_t init_seed = 1;
};

// Multiple graphs packed into one flat node index space so each layer is a
// single GEMM per batch.
struct GraphBatch {
  Eigen::MatrixXf features;
  std::shared_ptr<nn::RowPairs> adj;                 // GIN aggregation
  std::shared_ptr<nn::WeightedRowPairs> norm_adj;    // GCN propagation
  std::vector<int> segment;                          // node -> graph position
  std::vector<int> labels;                           // 1..k
  int n_graphs = 0;
};

GraphBatch make_batch(const std::vector<const Graph*>& graphs, const std::vector<int>& labels,
                      ModelKind kind);

class GraphClassifier {
 public:
  explicit GraphClassifier(const ClassifierArch& arch);

  const ClassifierArch& arch() const { return arch_; }
  nn::ParamStore<float>& params() { return store_; }
  const nn::ParamStore<float>& params() const { return store_; }

  std::vector<nn::Var<float>> bind(nn::Tape<float>& tape, bool with_grad) const {
    return nn::bind_params(tape, store_, with_grad);
  }

  // Batch logits, one row per graph.
  nn::Var<float> forward(nn::Tape<float>& tape, const std::vector<nn::Var<float>>& bound,
                         const GraphBatch& batch) const;

  // Argmax accuracy over the given (un-augmented) graphs.
  double accuracy(const Dataset& dataset, const std::vector<int>& indices, int batch_size = 64) const;

 private:
  ClassifierArch arch_;
  nn::ParamStore<float> store_;
  std::vector<nn::GinLayer<float>> gin_layers_;
  std::vector<nn::GcnLayer<float>> gcn_layers_;
  nn::Mlp<float> head_;
  nn::Readout readout_ = nn::Readout::Mean;
};

// --- augmentation plumbing -----------------------------------------------------

struct AugmentSpec {
  enum class Mode { None, Uniform, Gt, Policy };
  Mode mode = Mode::None;
  TransformKind kind = TransformKind::MaskNF;  // uniform / gt
  double rate = kDefaultUniformRate;
  DatasetKind dataset_kind = DatasetKind::Colors;  // gt
  const PolicyModel<float>* policy = nullptr;      // policy mode, frozen
  int steps = 8;
  double cap = 0.05;
  bool apply_cap = true;

  static AugmentSpec::Mode parse_mode(const std::string& s);
  static std::string mode_name(Mode m);
};

Graph augment_graph(const Graph& g, const AugmentSpec& spec, Rng& rng);

// --- reward + REINFORCE ----------------------------------------------------------

// log(clamp(s, 1e-7, 1)); always <= 0 and finite.
double reward_from_score(double s);

// R_T = reward_from_score(s(G_0, G_T)).
double compute_reward(const Graph& g0, const Graph& gT, const MatchingEncoder<float>& reward_model);

struct TrajectoryGrad {
  nn::Var<float> total_log_prob;  // sum over steps, on the shared batch tape
  double reward = 0.0;
};

struct ReinforceStats {
  double mean_reward = 0.0;
  double loss = 0.0;
};

// Accumulates the policy gradient of loss = -mean_i (R_i - baseline) * logp_i
// into `params` (no optimizer step). `bound` must be the tape's leased
// parameters.
ReinforceStats reinforce_backward(nn::Tape<float>& tape, const std::vector<TrajectoryGrad>& batch,
                                  nn::ParamStore<float>& params,
                                  const std::vector<nn::Var<float>>& bound, double baseline = 0.0);

// reinforce_backward followed by one Adam step.
ReinforceStats reinforce_update(nn::Tape<float>& tape, const std::vector<TrajectoryGrad>& batch,
                                nn::ParamStore<float>& params,
                                const std::vector<nn::Var<float>>& bound, nn::Adam<float>& adam,
                                double baseline = 0.0);

struct RLConfig {
  int steps = 8;          // T
  double cap = 0.05;      // cap_fraction
  int batch_size = 32;
  double lr = 1e-4;
  int epochs = 10;
  bool moving_baseline = false;  // off = plain REINFORCE
  std::uint64_t seed = 11;

  static RLConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct PolicyTrainResult {
  std::vector<double> epoch_mean_reward;
  int updates = 0;
};

PolicyTrainResult train_policy(PolicyModel<float>& policy, const Dataset& dataset,
                               const std::vector<int>& pool,
                               const MatchingEncoder<float>& reward_model, const RLConfig& cfg);

// --- classifier training / evaluation ---------------------------------------------

struct ClassifierTrainConfig {
  ClassifierArch arch;
  int epochs = 50;
  int batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 3;
  AugmentSpec augment;
};

struct RunResult {
  double best_val_acc = 0.0;
  double test_acc = 0.0;
  int best_epoch = -1;
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_acc;     // per epoch
  long augment_calls = 0;          // exactly epochs * |train| (never val/test)
};

// Trains with on-the-fly augmentation of training graphs only, selects the
// best-validation epoch, and reports test accuracy of that snapshot.
RunResult train_classifier(const Dataset& dataset, const Split& split,
                           const ClassifierTrainConfig& cfg);

struct EvalEntry {
  std::string method, dataset, model;
  int fold = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::vector<EvalEntry> entries;
  double mean = 0.0;
  double stddev = 0.0;  // population

  double compute_mean() const;
  double compute_stddev() const;
  void finalize();
  void write_csv(const std::string& path) const;
  void append_to(EvalReport& other) const;
};

// repeats x folds cross-validation (3 x 10 by default): fold seeds are
// base_seed + repeat, per-run training seeds derive from them.
EvalReport run_cv(const Dataset& dataset, const std::string& method_name,
                  const ClassifierTrainConfig& base_cfg, int folds = 10, int repeats = 3,
                  std::uint64_t base_seed = 17);

// --- policy probe ----------------------------------------------------------------

struct DropProbeResult {
  double mean_member = 0.0;      // mean drop prob over triangle-member nodes
  double mean_non_member = 0.0;  // and over the rest
  long member_nodes = 0;
  long non_member_nodes = 0;
};

DropProbeResult probe_drop_probabilities(const PolicyModel<float>& policy, const Dataset& dataset,
                                         const std::vector<int>& indices);

}  // namespace graphaug
