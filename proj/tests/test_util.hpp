#pragma once

#include <doctest.h>

#include "grad_check.hpp"
#include "graphaug/graph.hpp"
#include "graphaug/rng.hpp"

namespace test_util {

inline graphaug::Graph random_graph(graphaug::Rng& rng, int min_n, int max_n, double edge_prob,
                                    int feature_dim) {
  graphaug::Graph g;
  g.num_nodes = rng.uniform_int(min_n, max_n);
  for (int u = 0; u < g.num_nodes; ++u)
    for (int v = u + 1; v < g.num_nodes; ++v)
      if (rng.bernoulli(edge_prob)) g.edges.emplace_back(u, v);
  g.features.resize(g.num_nodes, feature_dim);
  for (int v = 0; v < g.num_nodes; ++v)
    for (int c = 0; c < feature_dim; ++c) g.features(v, c) = static_cast<float>(rng.normal());
  return g;
}

inline graphaug::Graph path_graph(int n, int feature_dim = 1) {
  graphaug::Graph g;
  g.num_nodes = n;
  for (int v = 0; v + 1 < n; ++v) g.edges.emplace_back(v, v + 1);
  g.features = Eigen::MatrixXf::Ones(n, feature_dim);
  return g;
}

inline graphaug::Graph complete_graph(int n, int feature_dim = 1) {
  graphaug::Graph g;
  g.num_nodes = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  g.features = Eigen::MatrixXf::Ones(n, feature_dim);
  return g;
}

}  // namespace test_util
