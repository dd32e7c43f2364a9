#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphaug/action.hpp"
#include "graphaug/nn/optim.hpp"

namespace graphaug {

struct PolicyConfig {
  int feature_dim = 0;
  int encoder_layers = 3;
  int hidden = 64;           // encoder embedding width r, also the GRU width
  int category_hidden = 64;  // category head hidden size
  int head_hidden = 128;     // element head hidden size
  // ablations
  bool category_only = false;   // learned category selection, uniform elements
  double uniform_rate = 0.2;    // element rate used in category_only mode
  int fixed_category = -1;      // 0..2 pins c_t (single-category mode), -1 off
  std::uint64_t init_seed = 1;

  static PolicyConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// The augmentation model g: GIN encoder over the virtual-node-augmented
// graph, GRU + softmax head for category selection, and three sigmoid heads
// for per-element Bernoulli probabilities.
template <typename T>
class PolicyModel {
 public:
  using Tape = nn::Tape<T>;
  using Var = nn::Var<T>;

  explicit PolicyModel(const PolicyConfig& cfg) : cfg_(cfg) {
    check_arg(cfg.feature_dim >= 1, "policy: feature_dim must be >= 1");
    check_arg(cfg.fixed_category >= -1 && cfg.fixed_category <= 2, "policy: bad fixed_category");
    Rng rng(cfg.init_seed);
    vfeat_id_ = store_.add("policy.vfeat", nn::Mat<T>::Zero(1, cfg.feature_dim));
    int in = cfg.feature_dim;
    for (int l = 0; l < cfg.encoder_layers; ++l) {
      encoder_.emplace_back(store_, "policy.enc" + std::to_string(l), in, cfg.hidden, rng);
      in = cfg.hidden;
    }
    gru_ = nn::GruCell<T>(store_, "policy.gru", cfg.hidden, cfg.hidden, rng);
    category_head_ = nn::Mlp<T>(store_, "policy.cat", {cfg.hidden, cfg.category_hidden, 3},
                                nn::OutputActivation::SoftmaxRows, rng);
    mask_head_ = nn::Mlp<T>(store_, "policy.mask", {cfg.hidden, cfg.head_hidden, cfg.feature_dim},
                            nn::OutputActivation::Sigmoid, rng);
    drop_head_ = nn::Mlp<T>(store_, "policy.drop", {cfg.hidden, cfg.head_hidden, 1},
                            nn::OutputActivation::Sigmoid, rng);
    perturb_head_ = nn::Mlp<T>(store_, "policy.perturb", {cfg.hidden + 1, cfg.head_hidden, 1},
                               nn::OutputActivation::Sigmoid, rng);
  }

  const PolicyConfig& config() const { return cfg_; }
  nn::ParamStore<T>& params() { return store_; }
  const nn::ParamStore<T>& params() const { return store_; }

  std::vector<Var> bind(Tape& tape, bool with_grad) const {
    return nn::bind_params(tape, store_, with_grad);
  }

  // Encoder: adds the virtual node (trainable initial feature), runs the GIN
  // stack on G', and returns (original-node embeddings, virtual embedding).
  std::pair<Var, Var> encode(Tape& tape, const std::vector<Var>& bound, const Graph& g) const {
    check_arg(g.num_nodes >= 1, "policy encode: empty graph");
    check_arg(g.feature_dim() == cfg_.feature_dim, "policy encode: feature dim mismatch");
    Graph aug = add_virtual_node_structure(g);
    Var x = nn::concat_rows(nn::constant(tape, nn::Mat<T>(g.features.cast<T>())), bound[vfeat_id_]);
    const auto adj = nn::adjacency_pairs(aug);
    Var h = x;
    for (const auto& layer : encoder_) h = layer.forward(bound, h, adj);
    Var nodes = nn::slice_rows(h, 0, g.num_nodes);
    Var virt = nn::slice_rows(h, g.num_nodes, 1);
    return {nodes, virt};
  }

  struct CategoryChoice {
    Var q;       // updated GRU state, 1 x r
    Var probs;   // p_t^C, 1 x 3
    Category category;
  };

  // q_t = GRU(q_{t-1}, e_virtual); p_t^C = softmax head; c_t ~ Categorical.
  CategoryChoice select_category(Tape& tape, const std::vector<Var>& bound, Var q_prev,
                                 Var virtual_emb, Rng& rng) const {
    CategoryChoice out{q_prev, {}, Category::MaskNF};
    if (cfg_.fixed_category >= 0) {
      nn::Mat<T> onehot = nn::Mat<T>::Zero(1, 3);
      onehot(0, cfg_.fixed_category) = T(1);
      out.probs = nn::constant(tape, std::move(onehot));
      out.category = static_cast<Category>(cfg_.fixed_category);
      return out;
    }
    out.q = gru_.forward(bound, q_prev, virtual_emb);
    out.probs = category_head_.forward(bound, out.q);
    const double u = rng.uniform();
    double acc = 0.0;
    int c = 2;
    for (int i = 0; i < 3; ++i) {
      acc += static_cast<double>(out.probs.value()(0, i));
      if (u < acc) {
        c = i;
        break;
      }
    }
    out.category = static_cast<Category>(c);
    return out;
  }

  // Samples per-element Bernoulli decisions for the chosen category and
  // returns the action plus the tape-level log-probability of the whole
  // action (category factor included).
  struct SampledAction {
    AugmentationAction action;
    Var log_prob;  // 1 x 1
  };

  SampledAction sample_action(Tape& tape, const std::vector<Var>& bound, const Graph& g,
                              const CategoryChoice& choice, Var node_emb, double cap_fraction,
                              Rng& rng) const {
    AugmentationAction action;
    action.category = choice.category;
    action.category_probs = choice.probs.value().template cast<float>().transpose();

    Var logp = category_log_prob(tape, choice);
    switch (choice.category) {
      case Category::MaskNF: {
        Var probs = cfg_.category_only
                        ? nn::constant(tape, nn::Mat<T>::Constant(g.num_nodes, g.feature_dim(),
                                                                  static_cast<T>(cfg_.uniform_rate)))
                        : mask_head_.forward(bound, node_emb);
        MaskPayload payload;
        payload.probs = probs.value().template cast<float>();
        payload.decide.resize(g.num_nodes, g.feature_dim());
        std::vector<std::uint8_t> flags(static_cast<std::size_t>(g.num_nodes) * g.feature_dim());
        std::vector<double> pvals(flags.size());
        for (int v = 0; v < g.num_nodes; ++v)
          for (int c = 0; c < g.feature_dim(); ++c) {
            const std::size_t i = static_cast<std::size_t>(v) * g.feature_dim() + c;
            pvals[i] = static_cast<double>(payload.probs(v, c));
            flags[i] = rng.bernoulli(pvals[i]) ? 1 : 0;
          }
        apply_cap(flags, pvals, cap_fraction);
        nn::Mat<T> onematrix(g.num_nodes, g.feature_dim());
        for (int v = 0; v < g.num_nodes; ++v)
          for (int c = 0; c < g.feature_dim(); ++c) {
            const std::size_t i = static_cast<std::size_t>(v) * g.feature_dim() + c;
            payload.decide(v, c) = flags[i];
            onematrix(v, c) = static_cast<T>(flags[i]);
          }
        logp = nn::add(logp, element_log_prob(tape, probs, std::move(onematrix)));
        action.payload = std::move(payload);
        break;
      }
      case Category::DropNode: {
        Var probs = cfg_.category_only
                        ? nn::constant(tape, nn::Mat<T>::Constant(g.num_nodes, 1,
                                                                  static_cast<T>(cfg_.uniform_rate)))
                        : drop_head_.forward(bound, node_emb);
        DropPayload payload;
        payload.probs.resize(g.num_nodes);
        for (int v = 0; v < g.num_nodes; ++v)
          payload.probs(v) = static_cast<float>(probs.value()(v, 0));
        std::vector<std::uint8_t> flags(static_cast<std::size_t>(g.num_nodes));
        std::vector<double> pvals(flags.size());
        for (int v = 0; v < g.num_nodes; ++v) {
          pvals[v] = static_cast<double>(payload.probs(v));
          flags[v] = rng.bernoulli(pvals[v]) ? 1 : 0;
        }
        apply_cap(flags, pvals, cap_fraction);
        payload.decide = flags;
        nn::Mat<T> onematrix(g.num_nodes, 1);
        for (int v = 0; v < g.num_nodes; ++v) onematrix(v, 0) = static_cast<T>(flags[v]);
        logp = nn::add(logp, element_log_prob(tape, probs, std::move(onematrix)));
        action.payload = std::move(payload);
        break;
      }
      case Category::PerturbEdge: {
        PerturbPayload payload;
        payload.droppable = g.edges;
        payload.addable = sample_addable_edges(g, g.num_edges(), rng);
        const int md = static_cast<int>(payload.droppable.size());
        const int ma = static_cast<int>(payload.addable.size());
        if (md + ma == 0) {
          payload.probs.resize(0);
          action.payload = std::move(payload);
          break;  // log p(c_t) alone
        }
        Var probs = perturb_probs(tape, bound, node_emb, payload.droppable, payload.addable);
        payload.probs.resize(md + ma);
        std::vector<std::uint8_t> flags(static_cast<std::size_t>(md + ma));
        std::vector<double> pvals(flags.size());
        for (int i = 0; i < md + ma; ++i) {
          payload.probs(i) = static_cast<float>(probs.value()(i, 0));
          pvals[static_cast<std::size_t>(i)] = static_cast<double>(payload.probs(i));
          flags[static_cast<std::size_t>(i)] = rng.bernoulli(pvals[static_cast<std::size_t>(i)]) ? 1 : 0;
        }
        apply_cap(flags, pvals, cap_fraction);
        payload.decide_drop.assign(flags.begin(), flags.begin() + md);
        payload.decide_add.assign(flags.begin() + md, flags.end());
        nn::Mat<T> onematrix(md + ma, 1);
        for (int i = 0; i < md + ma; ++i) onematrix(i, 0) = static_cast<T>(flags[static_cast<std::size_t>(i)]);
        logp = nn::add(logp, element_log_prob(tape, probs, std::move(onematrix)));
        action.payload = std::move(payload);
        break;
      }
    }
    return {std::move(action), logp};
  }

  struct StepRecord {
    Var log_prob;        // total log p(a_t)
    Var category_probs;  // p_t^C
  };

  struct Rollout {
    Trajectory trajectory;
    std::vector<StepRecord> steps;  // tape-level handles, index-aligned with trajectory.steps
  };

  // The full augmentation loop: T steps of encode -> select category ->
  // sample action -> apply. Reward is left unset.
  Rollout rollout(Tape& tape, const std::vector<Var>& bound, const Graph& g0, int n_steps,
                  double cap_fraction, Rng& rng) const {
    check_arg(n_steps >= 1, "rollout: need at least one step");
    Rollout out;
    out.trajectory.initial = g0;
    Var q = nn::constant(tape, nn::Mat<T>::Zero(1, cfg_.hidden));
    Graph g = g0;
    for (int t = 0; t < n_steps; ++t) {
      auto [nodes, virt] = encode(tape, bound, g);
      CategoryChoice choice = select_category(tape, bound, q, virt, rng);
      q = choice.q;
      SampledAction sampled = sample_action(tape, bound, g, choice, nodes, cap_fraction, rng);
      Graph next = apply_action(g, sampled.action);
      out.trajectory.steps.push_back(
          {std::move(g), sampled.action, static_cast<double>(sampled.log_prob.value()(0, 0))});
      out.steps.push_back({sampled.log_prob, choice.probs});
      g = std::move(next);
    }
    out.trajectory.final_graph = std::move(g);
    return out;
  }

  // No-grad convenience used when augmenting for classifier training.
  Trajectory augment(const Graph& g0, int n_steps, double cap_fraction, Rng& rng) const {
    Tape tape;
    const auto bound = bind(tape, false);
    return rollout(tape, bound, g0, n_steps, cap_fraction, rng).trajectory;
  }

  // Recomputes the log-probabilities of a recorded trajectory's actions on a
  // fresh tape (same categories, decisions, and addable sets).
  std::vector<Var> replay_log_probs(Tape& tape, const std::vector<Var>& bound,
                                    const Trajectory& traj) const {
    std::vector<Var> out;
    Var q = nn::constant(tape, nn::Mat<T>::Zero(1, cfg_.hidden));
    for (const auto& step : traj.steps) {
      auto [nodes, virt] = encode(tape, bound, step.before);
      Var logp;
      if (cfg_.fixed_category >= 0) {
        logp = nn::constant(tape, nn::Mat<T>::Zero(1, 1));
      } else {
        q = gru_.forward(bound, q, virt);
        Var probs = category_head_.forward(bound, q);
        Var pc = nn::gather_elems(probs, {{0, static_cast<int>(step.action.category)}});
        logp = nn::log_(nn::clamp(pc, static_cast<T>(kProbFloor), T(1)));
      }
      switch (step.action.category) {
        case Category::MaskNF: {
          const auto& payload = std::get<MaskPayload>(step.action.payload);
          Var probs = cfg_.category_only
                          ? nn::constant(tape, nn::Mat<T>::Constant(step.before.num_nodes,
                                                                    step.before.feature_dim(),
                                                                    static_cast<T>(cfg_.uniform_rate)))
                          : mask_head_.forward(bound, nodes);
          logp = nn::add(logp, element_log_prob(tape, probs,
                                                payload.decide.template cast<T>().eval()));
          break;
        }
        case Category::DropNode: {
          const auto& payload = std::get<DropPayload>(step.action.payload);
          Var probs = cfg_.category_only
                          ? nn::constant(tape, nn::Mat<T>::Constant(step.before.num_nodes, 1,
                                                                    static_cast<T>(cfg_.uniform_rate)))
                          : drop_head_.forward(bound, nodes);
          nn::Mat<T> ones(step.before.num_nodes, 1);
          for (int v = 0; v < step.before.num_nodes; ++v)
            ones(v, 0) = static_cast<T>(payload.decide[static_cast<std::size_t>(v)]);
          logp = nn::add(logp, element_log_prob(tape, probs, std::move(ones)));
          break;
        }
        case Category::PerturbEdge: {
          const auto& payload = std::get<PerturbPayload>(step.action.payload);
          const int md = static_cast<int>(payload.droppable.size());
          const int ma = static_cast<int>(payload.addable.size());
          if (md + ma == 0) break;
          Var probs = perturb_probs(tape, bound, nodes, payload.droppable, payload.addable);
          nn::Mat<T> ones(md + ma, 1);
          for (int i = 0; i < md; ++i) ones(i, 0) = static_cast<T>(payload.decide_drop[static_cast<std::size_t>(i)]);
          for (int i = 0; i < ma; ++i)
            ones(md + i, 0) = static_cast<T>(payload.decide_add[static_cast<std::size_t>(i)]);
          logp = nn::add(logp, element_log_prob(tape, probs, std::move(ones)));
          break;
        }
      }
      out.push_back(logp);
    }
    return out;
  }

  // Per-node drop-head probabilities (no-grad). Probe used to inspect what
  // the trained policy would mark for dropping.
  Eigen::VectorXf drop_probabilities(const Graph& g) const {
    Tape tape;
    const auto bound = bind(tape, false);
    auto [nodes, virt] = encode(tape, bound, g);
    Var probs = drop_head_.forward(bound, nodes);
    Eigen::VectorXf out(g.num_nodes);
    for (int v = 0; v < g.num_nodes; ++v) out(v) = static_cast<float>(probs.value()(v, 0));
    return out;
  }

  void save(const std::string& path, int step_count) const {
    nlohmann::json meta = {{"kind", "policy"},
                           {"config", cfg_.to_json()},
                           {"seed", cfg_.init_seed},
                           {"step_count", step_count}};
    nn::save_checkpoint(store_, meta.dump(), path);
  }

  static PolicyModel load(const std::string& path) {
    const nn::Checkpoint ckpt = nn::load_checkpoint_raw(path);
    const auto meta = nlohmann::json::parse(ckpt.metadata_json);
    check(meta.value("kind", "") == "policy", ErrorKind::Parse,
          "checkpoint at " + path + " is not a policy checkpoint");
    PolicyModel model(PolicyConfig::from_json(meta.at("config")));
    nn::restore_params(model.store_, ckpt);
    return model;
  }

 private:
  static Graph add_virtual_node_structure(const Graph& g) {
    Graph aug;
    aug.num_nodes = g.num_nodes + 1;
    aug.edges = g.edges;
    for (int v = 0; v < g.num_nodes; ++v) aug.edges.emplace_back(v, g.num_nodes);
    return aug;  // features handled on the tape (virtual row is trainable)
  }

  Var category_log_prob(Tape& tape, const CategoryChoice& choice) const {
    if (cfg_.fixed_category >= 0) return nn::constant(tape, nn::Mat<T>::Zero(1, 1));
    Var pc = nn::gather_elems(choice.probs, {{0, static_cast<int>(choice.category)}});
    return nn::log_(nn::clamp(pc, static_cast<T>(kProbFloor), T(1)));
  }

  // sum over elements of o log p + (1-o) log(1-p), probabilities clamped
  static Var element_log_prob(Tape& tape, Var probs, nn::Mat<T> decisions) {
    Var o = nn::constant(tape, std::move(decisions));
    Var p = nn::clamp(probs, static_cast<T>(kProbFloor), static_cast<T>(1.0 - kProbFloor));
    Var on = nn::cmul(o, nn::log_(p));
    Var off = nn::cmul(nn::one_minus(o), nn::log_(nn::one_minus(p)));
    return nn::sum_all(nn::add(on, off));
  }

  // MLP^P rows: [e_u + e_v, 1] for droppable, [e_u + e_v, 0] for addable.
  Var perturb_probs(Tape& tape, const std::vector<Var>& bound, Var node_emb,
                    const std::vector<Edge>& droppable, const std::vector<Edge>& addable) const {
    if (cfg_.category_only) {
      return nn::constant(tape, nn::Mat<T>::Constant(static_cast<Eigen::Index>(droppable.size() + addable.size()), 1,
                                                     static_cast<T>(cfg_.uniform_rate)));
    }
    std::vector<int> us, vs;
    us.reserve(droppable.size() + addable.size());
    vs.reserve(droppable.size() + addable.size());
    for (const Edge& e : droppable) {
      us.push_back(e.first);
      vs.push_back(e.second);
    }
    for (const Edge& e : addable) {
      us.push_back(e.first);
      vs.push_back(e.second);
    }
    Var sums = nn::add(nn::gather_rows(node_emb, us), nn::gather_rows(node_emb, vs));
    nn::Mat<T> indicator(static_cast<Eigen::Index>(us.size()), 1);
    for (std::size_t i = 0; i < us.size(); ++i)
      indicator(static_cast<Eigen::Index>(i), 0) = i < droppable.size() ? T(1) : T(0);
    Var input = nn::concat_cols(sums, nn::constant(tape, std::move(indicator)));
    return perturb_head_.forward(bound, input);
  }

  // Keeps at most ceil(cap * #elements) positive flags, preferring the
  // highest sampling probabilities; ties break toward lower element index.
  static void apply_cap(std::vector<std::uint8_t>& flags, const std::vector<double>& probs,
                        double cap_fraction) {
    if (cap_fraction <= 0.0) return;
    const int budget = static_cast<int>(
        std::ceil(cap_fraction * static_cast<double>(flags.size())));
    std::vector<int> positives;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (flags[i]) positives.push_back(static_cast<int>(i));
    if (static_cast<int>(positives.size()) <= budget) return;
    std::stable_sort(positives.begin(), positives.end(),
                     [&](int a, int b) { return probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(b)]; });
    for (std::size_t k = static_cast<std::size_t>(budget); k < positives.size(); ++k)
      flags[static_cast<std::size_t>(positives[k])] = 0;
  }

  PolicyConfig cfg_;
  nn::ParamStore<T> store_;
  int vfeat_id_ = -1;
  std::vector<nn::GinLayer<T>> encoder_;
  nn::GruCell<T> gru_;
  nn::Mlp<T> category_head_, mask_head_, drop_head_, perturb_head_;
};

extern template class PolicyModel<float>;
extern template class PolicyModel<double>;

}  // namespace graphaug
