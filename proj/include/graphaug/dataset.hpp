#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphaug/graph.hpp"
#include "graphaug/rng.hpp"

namespace graphaug {

struct Dataset {
  std::vector<LabeledGraph> graphs;
  int num_classes = 0;
  int feature_dim = 0;
  std::string name;

  int size() const { return static_cast<int>(graphs.size()); }
  std::vector<int> labels() const;
  void validate() const;
};

struct NodeRange {
  int min_nodes = 0;
  int max_nodes = 0;
};

// --- label oracles ------------------------------------------------------

// Number of 3-cliques, counted by sorted-neighbor-list intersection.
int count_triangles(const Graph& g);

// Number of nodes whose color is green (one-hot color in columns 0..2,
// green = column 1). Throws if any color block is not one-hot.
int count_green(const Graph& g);

// Per-node / per-edge triangle membership (aligned with g.edges).
std::vector<char> nodes_in_triangles(const Graph& g);
std::vector<char> edges_in_triangles(const Graph& g);

// --- synthetic generators -------------------------------------------------

// Erdos-Renyi topology, edge probability drawn per graph from [0.1, 0.4].
// COLORS: 4 feature columns (one-hot red/green/blue + one uniform-random
// nuisance column), label = green-node count, resampled into {1..10}.
Dataset gen_colors(int n_graphs, NodeRange range, std::uint64_t seed);

// TRIANGLES: constant all-ones single-column features (everything the model
// sees derives from the current structure), label = triangle count,
// resampled into {1..10}.
Dataset gen_triangles(int n_graphs, NodeRange range, std::uint64_t seed);

inline constexpr int kGeneratorResampleCap = 1000;

// --- TU flat-file format --------------------------------------------------

struct TuParseStats {
  int self_loops_dropped = 0;
  int duplicate_edges_collapsed = 0;
};

// Parses the DS_A.txt / DS_graph_indicator.txt / DS_graph_labels.txt family
// (plus optional DS_node_labels.txt / DS_node_attributes.txt) from
// `directory`. Datasets without node labels or attributes get one-hot degree
// features capped at `degree_cap`.
Dataset parse_tu_dataset(const std::string& directory, int degree_cap = 64,
                         TuParseStats* stats = nullptr);

// --- splits ---------------------------------------------------------------

struct Split {
  std::vector<int> train, val, test;
};

struct SplitSpec {
  // k-fold mode: per-graph fold id; explicit mode: fold_of empty.
  std::vector<int> fold_of;
  int folds = 0;
  Split fixed;  // explicit mode
  std::uint64_t seed = 0;

  bool is_kfold() const { return !fold_of.empty(); }
};

// Stratified-by-label fold assignment, deterministic under seed.
SplitSpec kfold_splits(const std::vector<int>& labels, int folds, std::uint64_t seed);

// Fold i: test = fold i, validation = fold (i+1) mod folds, train = rest.
Split resolve_fold(const SplitSpec& spec, int fold);

// Contiguous train/val/test blocks (fixed-split synthetic protocol).
SplitSpec fixed_split(int n_train, int n_val, int n_test);

// --- serialization ---------------------------------------------------------

// Line-oriented text format, documented in the README. Deterministic output.
void save_dataset(const Dataset& d, const std::string& path);

// Loads a serialized dataset. When verify_oracle is set and the dataset name
// is COLORS or TRIANGLES, every label is re-checked against its oracle.
Dataset load_dataset(const std::string& path, bool verify_oracle = true);

// Label histogram as (label, count) pairs sorted by label.
std::vector<std::pair<int, int>> class_histogram(const Dataset& d);

}  // namespace graphaug
