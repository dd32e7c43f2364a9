#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "graphaug/common.hpp"

namespace graphaug {

using Edge = std::pair<int, int>;  // canonical: first < second

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

// Undirected graph with dense node features. Values are immutable after
// construction: every transform returns a new graph.
struct Graph {
  int num_nodes = 0;
  std::vector<Edge> edges;        // canonical pairs, sorted, unique
  Eigen::MatrixXf features;       // num_nodes x d

  int feature_dim() const { return static_cast<int>(features.cols()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
  void validate() const;  // throws Error(InvalidArgument) on broken invariants
};

bool operator==(const Graph& a, const Graph& b);

struct LabeledGraph {
  Graph graph;
  int label = 0;  // in {1..k}
};

// Sorts, canonicalizes and dedups an edge list in place. Self-loops are
// rejected (throws); use the TU parser path when loops must be dropped.
std::vector<Edge> canonical_edges(std::vector<Edge> edges);

// New graph with one extra node connected to every original node. The extra
// node's feature row is init_feature. An empty graph yields a single isolated
// node.
Graph add_virtual_node(const Graph& g, const Eigen::VectorXf& init_feature);

// Induced subgraph on the nodes NOT in `drop`. Remaining nodes are re-indexed
// preserving original relative order; feature rows follow their nodes.
Graph remove_nodes(const Graph& g, const std::vector<int>& drop);

// Dense symmetric 0/1 adjacency matrix with zero diagonal.
Eigen::MatrixXd adjacency(const Graph& g);

// Sorted neighbor lists.
std::vector<std::vector<int>> neighbor_lists(const Graph& g);

// Node degrees.
std::vector<int> degrees(const Graph& g);

}  // namespace graphaug
