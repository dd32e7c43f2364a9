#include "graphaug/transforms.hpp"

#include <algorithm>
#include <set>

#include "graphaug/dataset.hpp"

namespace graphaug {

TransformKind parse_transform_kind(const std::string& s) {
  if (s == "masknf") return TransformKind::MaskNF;
  if (s == "dropnode") return TransformKind::DropNode;
  if (s == "perturbedge") return TransformKind::PerturbEdge;
  if (s == "dropedge") return TransformKind::DropEdge;
  fail(ErrorKind::InvalidArgument,
       "bad transform kind '" + s + "' (want masknf|dropnode|perturbedge|dropedge)");
}

std::string transform_kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::MaskNF: return "masknf";
    case TransformKind::DropNode: return "dropnode";
    case TransformKind::PerturbEdge: return "perturbedge";
    case TransformKind::DropEdge: return "dropedge";
  }
  return "?";
}

Graph apply_mask_nf(const Graph& g, const MaskDecision& m) {
  check_arg(m.mask.rows() == g.num_nodes && m.mask.cols() == g.features.cols(),
            "apply_mask_nf: mask shape mismatch");
  Graph out = g;
  for (int v = 0; v < g.num_nodes; ++v)
    for (int c = 0; c < g.feature_dim(); ++c)
      if (m.mask(v, c)) out.features(v, c) = 0.0f;
  return out;
}

Graph apply_drop_node(const Graph& g, const DropDecision& d) {
  check_arg(static_cast<int>(d.drop.size()) == g.num_nodes, "apply_drop_node: length mismatch");
  std::vector<int> drop;
  for (int v = 0; v < g.num_nodes; ++v)
    if (d.drop[v]) drop.push_back(v);
  if (static_cast<int>(drop.size()) == g.num_nodes) return g;  // all-drop guard
  return remove_nodes(g, drop);
}

Graph apply_perturb_edge(const Graph& g, const PerturbDecision& p) {
  check_arg(p.droppable.size() == p.drop_flag.size() && p.addable.size() == p.add_flag.size(),
            "apply_perturb_edge: flag length mismatch");
  check_arg(p.addable.size() <= g.edges.size(), "apply_perturb_edge: |addable| > |edges|");
  std::set<Edge> edges(g.edges.begin(), g.edges.end());
  for (std::size_t i = 0; i < p.droppable.size(); ++i) {
    check_arg(g.has_edge(p.droppable[i].first, p.droppable[i].second),
              "apply_perturb_edge: droppable entry is not a graph edge");
    if (p.drop_flag[i]) edges.erase(make_edge(p.droppable[i].first, p.droppable[i].second));
  }
  for (std::size_t i = 0; i < p.addable.size(); ++i) {
    const Edge e = make_edge(p.addable[i].first, p.addable[i].second);
    check_arg(e.first != e.second, "apply_perturb_edge: addable self-loop");
    check_arg(e.second < g.num_nodes && e.first >= 0, "apply_perturb_edge: addable out of range");
    check_arg(!g.has_edge(e.first, e.second), "apply_perturb_edge: addable already an edge");
    if (p.add_flag[i]) edges.insert(e);
  }
  Graph out = g;
  out.edges.assign(edges.begin(), edges.end());
  return out;
}

std::vector<Edge> sample_addable_edges(const Graph& g, int max_count, Rng& rng) {
  std::vector<Edge> non_edges;
  auto it = g.edges.begin();
  for (int u = 0; u < g.num_nodes; ++u)
    for (int v = u + 1; v < g.num_nodes; ++v) {
      if (it != g.edges.end() && it->first == u && it->second == v)
        ++it;
      else
        non_edges.emplace_back(u, v);
    }
  const int k = std::min<int>(max_count, static_cast<int>(non_edges.size()));
  const auto picks = rng.sample_without_replacement(static_cast<int>(non_edges.size()), k);
  std::vector<Edge> out;
  out.reserve(picks.size());
  for (int i : picks) out.push_back(non_edges[i]);
  std::sort(out.begin(), out.end());
  return out;
}

Graph uniform_mask_nf(const Graph& g, double rate, Rng& rng) {
  check_arg(rate >= 0.0 && rate <= 1.0, "uniform_mask_nf: rate outside [0,1]");
  MaskDecision m;
  m.mask.setZero(g.num_nodes, g.feature_dim());
  for (int v = 0; v < g.num_nodes; ++v)
    for (int c = 0; c < g.feature_dim(); ++c) m.mask(v, c) = rng.bernoulli(rate) ? 1 : 0;
  return apply_mask_nf(g, m);
}

Graph uniform_drop_node(const Graph& g, double rate, Rng& rng) {
  check_arg(rate >= 0.0 && rate <= 1.0, "uniform_drop_node: rate outside [0,1]");
  DropDecision d;
  d.drop.resize(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v) d.drop[v] = rng.bernoulli(rate) ? 1 : 0;
  return apply_drop_node(g, d);
}

Graph uniform_perturb_edge(const Graph& g, double rate, Rng& rng) {
  check_arg(rate >= 0.0 && rate <= 1.0, "uniform_perturb_edge: rate outside [0,1]");
  PerturbDecision p;
  p.droppable = g.edges;
  p.drop_flag.resize(p.droppable.size());
  for (auto& f : p.drop_flag) f = rng.bernoulli(rate) ? 1 : 0;
  p.addable = sample_addable_edges(g, g.num_edges(), rng);
  p.add_flag.resize(p.addable.size());
  for (auto& f : p.add_flag) f = rng.bernoulli(rate) ? 1 : 0;
  return apply_perturb_edge(g, p);
}

Graph uniform_drop_edge(const Graph& g, double rate, Rng& rng) {
  check_arg(rate >= 0.0 && rate <= 1.0, "uniform_drop_edge: rate outside [0,1]");
  PerturbDecision p;
  p.droppable = g.edges;
  p.drop_flag.resize(p.droppable.size());
  for (auto& f : p.drop_flag) f = rng.bernoulli(rate) ? 1 : 0;
  return apply_perturb_edge(g, p);
}

namespace {

Graph gt_colors(TransformKind kind, const Graph& g, double rate, Rng& rng) {
  switch (kind) {
    case TransformKind::MaskNF: {
      // color columns 0..2 carry the label; only the rest are maskable
      MaskDecision m;
      m.mask.setZero(g.num_nodes, g.feature_dim());
      for (int v = 0; v < g.num_nodes; ++v)
        for (int c = 3; c < g.feature_dim(); ++c) m.mask(v, c) = rng.bernoulli(rate) ? 1 : 0;
      return apply_mask_nf(g, m);
    }
    case TransformKind::DropNode: {
      DropDecision d;
      d.drop.assign(g.num_nodes, 0);
      for (int v = 0; v < g.num_nodes; ++v)
        if (g.features(v, 1) != 1.0f) d.drop[v] = rng.bernoulli(rate) ? 1 : 0;
      return apply_drop_node(g, d);
    }
    case TransformKind::PerturbEdge:
      // edge modifications never change the green count
      return uniform_perturb_edge(g, rate, rng);
    case TransformKind::DropEdge:
      return uniform_drop_edge(g, rate, rng);
  }
  fail(ErrorKind::Internal, "gt_colors: bad kind");
}

Graph gt_triangles(TransformKind kind, const Graph& g, double rate, Rng& rng) {
  switch (kind) {
    case TransformKind::MaskNF:
      // features never change the triangle count
      return uniform_mask_nf(g, rate, rng);
    case TransformKind::DropNode: {
      const auto member = nodes_in_triangles(g);
      DropDecision d;
      d.drop.assign(g.num_nodes, 0);
      for (int v = 0; v < g.num_nodes; ++v)
        if (!member[v]) d.drop[v] = rng.bernoulli(rate) ? 1 : 0;
      return apply_drop_node(g, d);
    }
    case TransformKind::PerturbEdge:
    case TransformKind::DropEdge: {
      // drop only edges outside every triangle
      const auto member = edges_in_triangles(g);
      PerturbDecision p;
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (member[i]) continue;
        p.droppable.push_back(g.edges[i]);
        p.drop_flag.push_back(rng.bernoulli(rate) ? 1 : 0);
      }
      Graph out = apply_perturb_edge(g, p);
      if (kind == TransformKind::DropEdge) return out;
      // additions accepted one at a time, rejecting any that would complete
      // a triangle given the edges accepted so far
      const auto candidates = sample_addable_edges(g, g.num_edges(), rng);
      auto nbr = neighbor_lists(out);
      for (const Edge& e : candidates) {
        if (!rng.bernoulli(rate)) continue;
        if (out.has_edge(e.first, e.second)) continue;
        const auto& a = nbr[e.first];
        const auto& b = nbr[e.second];
        bool creates = false;
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() && ib != b.end()) {
          if (*ia < *ib)
            ++ia;
          else if (*ib < *ia)
            ++ib;
          else {
            creates = true;
            break;
          }
        }
        if (creates) continue;
        out.edges.push_back(e);
        std::sort(out.edges.begin(), out.edges.end());
        nbr[e.first].insert(std::lower_bound(nbr[e.first].begin(), nbr[e.first].end(), e.second),
                            e.second);
        nbr[e.second].insert(std::lower_bound(nbr[e.second].begin(), nbr[e.second].end(), e.first),
                             e.first);
      }
      return out;
    }
  }
  fail(ErrorKind::Internal, "gt_triangles: bad kind");
}

}  // namespace

Graph gt_transform(DatasetKind dataset, TransformKind kind, const Graph& g, double rate, Rng& rng) {
  check_arg(rate >= 0.0 && rate <= 1.0, "gt_transform: rate outside [0,1]");
  switch (dataset) {
    case DatasetKind::Colors: return gt_colors(kind, g, rate, rng);
    case DatasetKind::Triangles: return gt_triangles(kind, g, rate, rng);
  }
  fail(ErrorKind::Internal, "gt_transform: bad dataset kind");
}

}  // namespace graphaug
