#pragma once

#include <Eigen/Dense>
#include <vector>

#include "graphaug/graph.hpp"
#include "graphaug/rng.hpp"

namespace graphaug {

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Per-cell feature masking decision: 1 = set feature to zero.
struct MaskDecision {
  BinaryMatrix mask;  // num_nodes x d
};

// Per-node dropping decision: 1 = drop.
struct DropDecision {
  std::vector<std::uint8_t> drop;
};

// Edge perturbation decision. droppable must be a subset of the graph's
// edges; addable must be disjoint from them with |addable| <= |edges|.
struct PerturbDecision {
  std::vector<Edge> droppable;
  std::vector<std::uint8_t> drop_flag;
  std::vector<Edge> addable;
  std::vector<std::uint8_t> add_flag;
};

enum class TransformKind { MaskNF, DropNode, PerturbEdge, DropEdge };
enum class DatasetKind { Colors, Triangles };

TransformKind parse_transform_kind(const std::string& s);
std::string transform_kind_name(TransformKind k);

// --- deterministic application ------------------------------------------------

Graph apply_mask_nf(const Graph& g, const MaskDecision& m);

// All-marked decisions return the input graph unchanged (documented guard:
// downstream readouts need at least one node).
Graph apply_drop_node(const Graph& g, const DropDecision& d);

Graph apply_perturb_edge(const Graph& g, const PerturbDecision& p);

// --- uniform baselines ----------------------------------------------------------

Graph uniform_mask_nf(const Graph& g, double rate, Rng& rng);
Graph uniform_drop_node(const Graph& g, double rate, Rng& rng);
Graph uniform_perturb_edge(const Graph& g, double rate, Rng& rng);
Graph uniform_drop_edge(const Graph& g, double rate, Rng& rng);

// Uniformly sampled non-edges, at most max(= |E| by default) of them.
std::vector<Edge> sample_addable_edges(const Graph& g, int max_count, Rng& rng);

// --- ground-truth-aware transforms ----------------------------------------------
//
// Uniform transforms restricted to elements that provably cannot change the
// dataset's label oracle:
//   COLORS + MaskNF: only non-color columns (>= 3) are maskable.
//   COLORS + DropNode: green nodes are protected.
//   COLORS + PerturbEdge: edges never affect the color count; plain uniform.
//   TRIANGLES + DropNode: nodes in any triangle are protected.
//   TRIANGLES + PerturbEdge: triangle edges protected from dropping; added
//     edges that would complete a new triangle are rejected.
//   TRIANGLES + MaskNF: features never affect the triangle count; plain uniform.
Graph gt_transform(DatasetKind dataset, TransformKind kind, const Graph& g, double rate, Rng& rng);

inline constexpr double kDefaultUniformRate = 0.2;

}  // namespace graphaug
