#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "graphaug/transforms.hpp"

namespace graphaug {

// Augmentation categories, in the order of the category head's outputs.
enum class Category { MaskNF = 0, DropNode = 1, PerturbEdge = 2 };

const char* category_name(Category c);
Category parse_category(const std::string& s);

struct MaskPayload {
  BinaryMatrix decide;       // num_nodes x d
  Eigen::MatrixXf probs;     // sampling probabilities, same shape
};

struct DropPayload {
  std::vector<std::uint8_t> decide;
  Eigen::VectorXf probs;
};

struct PerturbPayload {
  std::vector<Edge> droppable;
  std::vector<std::uint8_t> decide_drop;
  std::vector<Edge> addable;
  std::vector<std::uint8_t> decide_add;
  Eigen::VectorXf probs;  // droppable entries first, then addable
};

// One MDP action: the sampled category, the category distribution it came
// from, and the per-element binary decisions with their probabilities.
struct AugmentationAction {
  Category category = Category::MaskNF;
  Eigen::Vector3f category_probs = Eigen::Vector3f::Zero();
  std::variant<MaskPayload, DropPayload, PerturbPayload> payload;

  int num_elements() const;
  int num_modified() const;
};

// log p(c_t) + sum over elements of o*log p + (1-o)*log(1-p), probabilities
// clamped to [1e-7, 1-1e-7]. Double-precision accumulation.
double action_log_prob(const AugmentationAction& a);

// Applies the recorded decisions through the transforms module.
Graph apply_action(const Graph& g, const AugmentationAction& a);

// One trajectory of the augmentation MDP.
struct Trajectory {
  Graph initial;
  struct Step {
    Graph before;
    AugmentationAction action;
    double log_prob;
  };
  std::vector<Step> steps;
  Graph final_graph;
  double reward = 0.0;
  bool has_reward = false;
};

// Re-applies every recorded action and checks the graph chain matches.
bool trajectory_chain_consistent(const Trajectory& t);

}  // namespace graphaug
