#include "graphaug/policy.hpp"

#include <cmath>

namespace graphaug {

const char* category_name(Category c) {
  switch (c) {
    case Category::MaskNF: return "masknf";
    case Category::DropNode: return "dropnode";
    case Category::PerturbEdge: return "perturbedge";
  }
  return "?";
}

Category parse_category(const std::string& s) {
  if (s == "masknf") return Category::MaskNF;
  if (s == "dropnode") return Category::DropNode;
  if (s == "perturbedge") return Category::PerturbEdge;
  fail(ErrorKind::InvalidArgument,
       "bad category '" + s + "' (want masknf|dropnode|perturbedge)");
}

int AugmentationAction::num_elements() const {
  if (const auto* m = std::get_if<MaskPayload>(&payload))
    return static_cast<int>(m->decide.size());
  if (const auto* d = std::get_if<DropPayload>(&payload))
    return static_cast<int>(d->decide.size());
  const auto& p = std::get<PerturbPayload>(payload);
  return static_cast<int>(p.decide_drop.size() + p.decide_add.size());
}

int AugmentationAction::num_modified() const {
  int n = 0;
  if (const auto* m = std::get_if<MaskPayload>(&payload)) {
    for (Eigen::Index i = 0; i < m->decide.size(); ++i) n += m->decide.data()[i] != 0;
  } else if (const auto* d = std::get_if<DropPayload>(&payload)) {
    for (auto f : d->decide) n += f != 0;
  } else {
    const auto& p = std::get<PerturbPayload>(payload);
    for (auto f : p.decide_drop) n += f != 0;
    for (auto f : p.decide_add) n += f != 0;
  }
  return n;
}

namespace {

double bernoulli_log_term(double p, bool on) {
  p = std::min(std::max(p, kProbFloor), 1.0 - kProbFloor);
  return on ? std::log(p) : std::log(1.0 - p);
}

}  // namespace

double action_log_prob(const AugmentationAction& a) {
  const double pc = std::min(
      std::max(static_cast<double>(a.category_probs(static_cast<int>(a.category))), kProbFloor), 1.0);
  double logp = std::log(pc);
  if (const auto* m = std::get_if<MaskPayload>(&a.payload)) {
    for (Eigen::Index v = 0; v < m->decide.rows(); ++v)
      for (Eigen::Index c = 0; c < m->decide.cols(); ++c)
        logp += bernoulli_log_term(m->probs(v, c), m->decide(v, c) != 0);
  } else if (const auto* d = std::get_if<DropPayload>(&a.payload)) {
    for (std::size_t v = 0; v < d->decide.size(); ++v)
      logp += bernoulli_log_term(d->probs(static_cast<Eigen::Index>(v)), d->decide[v] != 0);
  } else {
    const auto& p = std::get<PerturbPayload>(a.payload);
    for (std::size_t i = 0; i < p.decide_drop.size(); ++i)
      logp += bernoulli_log_term(p.probs(static_cast<Eigen::Index>(i)), p.decide_drop[i] != 0);
    for (std::size_t i = 0; i < p.decide_add.size(); ++i)
      logp += bernoulli_log_term(p.probs(static_cast<Eigen::Index>(p.decide_drop.size() + i)),
                                 p.decide_add[i] != 0);
  }
  return logp;
}

Graph apply_action(const Graph& g, const AugmentationAction& a) {
  if (const auto* m = std::get_if<MaskPayload>(&a.payload)) {
    return apply_mask_nf(g, MaskDecision{m->decide});
  }
  if (const auto* d = std::get_if<DropPayload>(&a.payload)) {
    return apply_drop_node(g, DropDecision{d->decide});
  }
  const auto& p = std::get<PerturbPayload>(a.payload);
  PerturbDecision dec;
  dec.droppable = p.droppable;
  dec.drop_flag = p.decide_drop;
  dec.addable = p.addable;
  dec.add_flag = p.decide_add;
  return apply_perturb_edge(g, dec);
}

bool trajectory_chain_consistent(const Trajectory& t) {
  if (t.steps.empty()) return t.initial == t.final_graph;
  if (!(t.steps.front().before == t.initial)) return false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Graph next = apply_action(t.steps[i].before, t.steps[i].action);
    const Graph& expect = i + 1 < t.steps.size() ? t.steps[i + 1].before : t.final_graph;
    if (!(next == expect)) return false;
  }
  return true;
}

PolicyConfig PolicyConfig::from_json(const nlohmann::json& j) {
  PolicyConfig cfg;
  cfg.feature_dim = j.at("feature_dim").get<int>();
  cfg.encoder_layers = j.value("encoder_layers", cfg.encoder_layers);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.category_hidden = j.value("category_hidden", cfg.category_hidden);
  cfg.head_hidden = j.value("head_hidden", cfg.head_hidden);
  cfg.category_only = j.value("category_only", cfg.category_only);
  cfg.uniform_rate = j.value("uniform_rate", cfg.uniform_rate);
  cfg.fixed_category = j.value("fixed_category", cfg.fixed_category);
  cfg.init_seed = j.value("init_seed", cfg.init_seed);
  return cfg;
}

nlohmann::json PolicyConfig::to_json() const {
  return {{"feature_dim", feature_dim},
          {"encoder_layers", encoder_layers},
          {"hidden", hidden},
          {"category_hidden", category_hidden},
          {"head_hidden", head_hidden},
          {"category_only", category_only},
          {"uniform_rate", uniform_rate},
          {"fixed_category", fixed_category},
          {"init_seed", init_seed}};
}

template class PolicyModel<float>;
template class PolicyModel<double>;

}  // namespace graphaug
