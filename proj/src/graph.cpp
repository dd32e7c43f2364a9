#include "graphaug/graph.hpp"

#include <algorithm>
#include <string>

namespace graphaug {

bool Graph::has_edge(int u, int v) const {
  const Edge e = make_edge(u, v);
  return std::binary_search(edges.begin(), edges.end(), e);
}

void Graph::validate() const {
  check_arg(num_nodes >= 0, "graph: negative node count");
  check_arg(features.rows() == num_nodes,
            "graph: feature rows (" + std::to_string(features.rows()) + ") != num_nodes (" +
                std::to_string(num_nodes) + ")");
  const Edge* prev = nullptr;
  for (const Edge& e : edges) {
    check_arg(e.first >= 0 && e.second < num_nodes, "graph: edge endpoint out of range");
    check_arg(e.first < e.second, "graph: edge not canonical or self-loop");
    if (prev) check_arg(*prev < e, "graph: edges not sorted/unique");
    prev = &e;
  }
  check_arg(features.allFinite() || num_nodes == 0, "graph: non-finite feature entry");
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes == b.num_nodes && a.edges == b.edges && a.features.rows() == b.features.rows() &&
         a.features.cols() == b.features.cols() && a.features == b.features;
}

std::vector<Edge> canonical_edges(std::vector<Edge> edges) {
  for (Edge& e : edges) {
    check_arg(e.first != e.second, "canonical_edges: self-loop");
    e = make_edge(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

Graph add_virtual_node(const Graph& g, const Eigen::VectorXf& init_feature) {
  check_arg(init_feature.size() == g.features.cols() || g.num_nodes == 0,
            "add_virtual_node: feature length mismatch");
  Graph out;
  out.num_nodes = g.num_nodes + 1;
  out.edges = g.edges;
  const int virt = g.num_nodes;
  for (int v = 0; v < g.num_nodes; ++v) out.edges.emplace_back(v, virt);
  std::sort(out.edges.begin(), out.edges.end());
  out.features.resize(out.num_nodes, init_feature.size());
  if (g.num_nodes > 0) out.features.topRows(g.num_nodes) = g.features;
  out.features.row(virt) = init_feature.transpose();
  return out;
}

Graph remove_nodes(const Graph& g, const std::vector<int>& drop) {
  std::vector<char> dropped(g.num_nodes, 0);
  for (int v : drop) {
    check_arg(v >= 0 && v < g.num_nodes, "remove_nodes: index out of range");
    dropped[v] = 1;
  }
  std::vector<int> new_index(g.num_nodes, -1);
  int kept = 0;
  for (int v = 0; v < g.num_nodes; ++v)
    if (!dropped[v]) new_index[v] = kept++;

  Graph out;
  out.num_nodes = kept;
  out.features.resize(kept, g.features.cols());
  for (int v = 0; v < g.num_nodes; ++v)
    if (new_index[v] >= 0) out.features.row(new_index[v]) = g.features.row(v);
  for (const Edge& e : g.edges)
    if (new_index[e.first] >= 0 && new_index[e.second] >= 0)
      out.edges.emplace_back(new_index[e.first], new_index[e.second]);
  // stable compaction keeps order, so edges stay sorted and canonical
  return out;
}

Eigen::MatrixXd adjacency(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.num_nodes, g.num_nodes);
  for (const Edge& e : g.edges) {
    a(e.first, e.second) = 1.0;
    a(e.second, e.first) = 1.0;
  }
  return a;
}

std::vector<std::vector<int>> neighbor_lists(const Graph& g) {
  std::vector<std::vector<int>> nbr(g.num_nodes);
  for (const Edge& e : g.edges) {
    nbr[e.first].push_back(e.second);
    nbr[e.second].push_back(e.first);
  }
  for (auto& lst : nbr) std::sort(lst.begin(), lst.end());
  return nbr;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> deg(g.num_nodes, 0);
  for (const Edge& e : g.edges) {
    ++deg[e.first];
    ++deg[e.second];
  }
  return deg;
}

}  // namespace graphaug
