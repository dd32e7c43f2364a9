#include "graphaug/dataset.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace graphaug {

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(graphs.size());
  for (const auto& lg : graphs) out.push_back(lg.label);
  return out;
}

void Dataset::validate() const {
  for (const auto& lg : graphs) {
    lg.graph.validate();
    check_arg(lg.label >= 1 && lg.label <= num_classes, "dataset: label outside {1..k}");
    check_arg(lg.graph.feature_dim() == feature_dim, "dataset: inconsistent feature dim");
  }
}

int count_triangles(const Graph& g) {
  const auto nbr = neighbor_lists(g);
  long long count = 0;
  for (const Edge& e : g.edges) {
    const auto& a = nbr[e.first];
    const auto& b = nbr[e.second];
    // count common neighbors w with w > e.second so each triangle is seen once
    auto ia = std::upper_bound(a.begin(), a.end(), e.second);
    auto ib = std::upper_bound(b.begin(), b.end(), e.second);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib)
        ++ia;
      else if (*ib < *ia)
        ++ib;
      else {
        ++count;
        ++ia;
        ++ib;
      }
    }
  }
  return static_cast<int>(count);
}

int count_green(const Graph& g) {
  check_arg(g.feature_dim() >= 3, "count_green: needs >= 3 feature columns");
  int green = 0;
  for (int v = 0; v < g.num_nodes; ++v) {
    int ones = 0;
    for (int c = 0; c < 3; ++c) {
      const float x = g.features(v, c);
      check_arg(x == 0.0f || x == 1.0f, "count_green: color block not one-hot (node " +
                                            std::to_string(v) + ")");
      ones += (x == 1.0f);
    }
    check_arg(ones == 1, "count_green: color block not one-hot (node " + std::to_string(v) + ")");
    if (g.features(v, 1) == 1.0f) ++green;
  }
  return green;
}

std::vector<char> nodes_in_triangles(const Graph& g) {
  std::vector<char> member(g.num_nodes, 0);
  const auto nbr = neighbor_lists(g);
  for (const Edge& e : g.edges) {
    const auto& a = nbr[e.first];
    const auto& b = nbr[e.second];
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib)
        ++ia;
      else if (*ib < *ia)
        ++ib;
      else {
        member[e.first] = member[e.second] = member[*ia] = 1;
        ++ia;
        ++ib;
      }
    }
  }
  return member;
}

std::vector<char> edges_in_triangles(const Graph& g) {
  std::vector<char> member(g.edges.size(), 0);
  const auto nbr = neighbor_lists(g);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& a = nbr[g.edges[i].first];
    const auto& b = nbr[g.edges[i].second];
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib)
        ++ia;
      else if (*ib < *ia)
        ++ib;
      else {
        member[i] = 1;
        break;
      }
    }
  }
  return member;
}

namespace {

Graph random_er_graph(int n, double edge_prob, Rng& rng) {
  Graph g;
  g.num_nodes = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(edge_prob)) g.edges.emplace_back(u, v);
  return g;
}

}  // namespace

Dataset gen_colors(int n_graphs, NodeRange range, std::uint64_t seed) {
  check_arg(n_graphs > 0, "gen_colors: n_graphs must be positive");
  check_arg(range.min_nodes >= 1 && range.min_nodes <= range.max_nodes,
            "gen_colors: infeasible node range (need at least one node for a green node)");
  Dataset d;
  d.name = "COLORS";
  d.num_classes = 10;
  d.feature_dim = 4;
  Rng rng(seed);
  for (int i = 0; i < n_graphs; ++i) {
    for (int attempt = 0;; ++attempt) {
      check(attempt < kGeneratorResampleCap, ErrorKind::InvalidArgument,
            "gen_colors: resample cap hit; node range cannot produce 1..10 green nodes");
      const int n = rng.uniform_int(range.min_nodes, range.max_nodes);
      Graph g = random_er_graph(n, rng.uniform(0.1, 0.4), rng);
      g.features.resize(n, 4);
      g.features.setZero();
      int green = 0;
      for (int v = 0; v < n; ++v) {
        const int color = rng.uniform_int(0, 2);
        g.features(v, color) = 1.0f;
        g.features(v, 3) = static_cast<float>(rng.uniform());
        green += (color == 1);
      }
      if (green < 1 || green > 10) continue;
      d.graphs.push_back({std::move(g), green});
      break;
    }
  }
  return d;
}

Dataset gen_triangles(int n_graphs, NodeRange range, std::uint64_t seed) {
  check_arg(n_graphs > 0, "gen_triangles: n_graphs must be positive");
  check_arg(range.min_nodes >= 3 && range.min_nodes <= range.max_nodes,
            "gen_triangles: infeasible node range (need >= 3 nodes for a triangle)");
  Dataset d;
  d.name = "TRIANGLES";
  d.num_classes = 10;
  d.feature_dim = 1;
  Rng rng(seed);
  for (int i = 0; i < n_graphs; ++i) {
    for (int attempt = 0;; ++attempt) {
      check(attempt < kGeneratorResampleCap, ErrorKind::InvalidArgument,
            "gen_triangles: resample cap hit; node range cannot produce 1..10 triangles");
      const int n = rng.uniform_int(range.min_nodes, range.max_nodes);
      Graph g = random_er_graph(n, rng.uniform(0.1, 0.4), rng);
      const int tri = count_triangles(g);
      if (tri < 1 || tri > 10) continue;
      g.features = Eigen::MatrixXf::Ones(n, 1);
      d.graphs.push_back({std::move(g), tri});
      break;
    }
  }
  return d;
}

SplitSpec kfold_splits(const std::vector<int>& labels, int folds, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  check_arg(folds >= 2, "kfold_splits: folds must be >= 2");
  check_arg(folds <= n, "kfold_splits: more folds than samples");
  SplitSpec spec;
  spec.folds = folds;
  spec.seed = seed;
  spec.fold_of.assign(n, -1);

  std::map<int, std::vector<int>> by_label;
  for (int i = 0; i < n; ++i) by_label[labels[i]].push_back(i);

  Rng rng(seed);
  int next_fold = 0;  // carried across label groups to balance fold sizes
  for (auto& [label, idx] : by_label) {
    (void)label;
    rng.shuffle(idx);
    for (int i : idx) {
      spec.fold_of[i] = next_fold;
      next_fold = (next_fold + 1) % folds;
    }
  }
  return spec;
}

Split resolve_fold(const SplitSpec& spec, int fold) {
  if (!spec.is_kfold()) return spec.fixed;
  check_arg(fold >= 0 && fold < spec.folds, "resolve_fold: fold out of range");
  const int val_fold = (fold + 1) % spec.folds;
  Split s;
  for (int i = 0; i < static_cast<int>(spec.fold_of.size()); ++i) {
    if (spec.fold_of[i] == fold)
      s.test.push_back(i);
    else if (spec.fold_of[i] == val_fold)
      s.val.push_back(i);
    else
      s.train.push_back(i);
  }
  return s;
}

SplitSpec fixed_split(int n_train, int n_val, int n_test) {
  check_arg(n_train > 0 && n_val > 0 && n_test > 0, "fixed_split: all parts must be non-empty");
  SplitSpec spec;
  int i = 0;
  for (int k = 0; k < n_train; ++k) spec.fixed.train.push_back(i++);
  for (int k = 0; k < n_val; ++k) spec.fixed.val.push_back(i++);
  for (int k = 0; k < n_test; ++k) spec.fixed.test.push_back(i++);
  return spec;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  check(out.good(), ErrorKind::Io, "save_dataset: cannot open " + path);
  out << "graphaug-dataset v1\n";
  out << "name " << d.name << "\n";
  out << "graphs " << d.graphs.size() << "\n";
  out << "classes " << d.num_classes << "\n";
  out << "dim " << d.feature_dim << "\n";
  char buf[64];
  for (std::size_t i = 0; i < d.graphs.size(); ++i) {
    const LabeledGraph& lg = d.graphs[i];
    out << "graph " << i << "\n";
    out << "label " << lg.label << "\n";
    out << "nodes " << lg.graph.num_nodes << "\n";
    out << "edges " << lg.graph.edges.size() << "\n";
    for (const Edge& e : lg.graph.edges) out << e.first << " " << e.second << "\n";
    out << "features\n";
    for (int v = 0; v < lg.graph.num_nodes; ++v) {
      for (int c = 0; c < d.feature_dim; ++c) {
        std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(lg.graph.features(v, c)));
        out << (c ? " " : "") << buf;
      }
      out << "\n";
    }
  }
  check(out.good(), ErrorKind::Io, "save_dataset: write failure on " + path);
}

namespace {

std::string next_line(std::istream& in, const std::string& path, int& lineno) {
  std::string line;
  check(static_cast<bool>(std::getline(in, line)), ErrorKind::Parse,
        path + ": unexpected end of file at line " + std::to_string(lineno + 1));
  ++lineno;
  return line;
}

// "key <values...>" line; returns the raw remainder after the key.
std::string expect_key(std::istream& in, const std::string& path, int& lineno,
                       const std::string& key) {
  const std::string line = next_line(in, path, lineno);
  check(line.rfind(key, 0) == 0, ErrorKind::Parse,
        path + ":" + std::to_string(lineno) + ": expected '" + key + "', got '" + line + "'");
  std::string rest = line.substr(key.size());
  if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
  return rest;
}

long parse_long(const std::string& s, const std::string& path, int lineno) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    check(pos == s.size(), ErrorKind::Parse, "");
    return v;
  } catch (...) {
    fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected integer, got '" + s + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::string& path, bool verify_oracle) {
  std::ifstream in(path);
  check(in.good(), ErrorKind::Io, "load_dataset: cannot open " + path);
  int lineno = 0;
  const std::string header = next_line(in, path, lineno);
  check(header == "graphaug-dataset v1", ErrorKind::Parse, path + ": bad header '" + header + "'");

  Dataset d;
  d.name = expect_key(in, path, lineno, "name");
  const long n_graphs = parse_long(expect_key(in, path, lineno, "graphs"), path, lineno);
  d.num_classes = static_cast<int>(parse_long(expect_key(in, path, lineno, "classes"), path, lineno));
  d.feature_dim = static_cast<int>(parse_long(expect_key(in, path, lineno, "dim"), path, lineno));

  for (long i = 0; i < n_graphs; ++i) {
    const long idx = parse_long(expect_key(in, path, lineno, "graph"), path, lineno);
    check(idx == i, ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": graph index mismatch");
    LabeledGraph lg;
    lg.label = static_cast<int>(parse_long(expect_key(in, path, lineno, "label"), path, lineno));
    lg.graph.num_nodes =
        static_cast<int>(parse_long(expect_key(in, path, lineno, "nodes"), path, lineno));
    const long n_edges = parse_long(expect_key(in, path, lineno, "edges"), path, lineno);
    for (long e = 0; e < n_edges; ++e) {
      std::istringstream ls(next_line(in, path, lineno));
      int u = -1, v = -1;
      ls >> u >> v;
      check(!ls.fail(), ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": bad edge line");
      lg.graph.edges.emplace_back(u, v);
    }
    expect_key(in, path, lineno, "features");
    lg.graph.features.resize(lg.graph.num_nodes, d.feature_dim);
    for (int v = 0; v < lg.graph.num_nodes; ++v) {
      std::istringstream ls(next_line(in, path, lineno));
      for (int c = 0; c < d.feature_dim; ++c) {
        double x = 0.0;
        ls >> x;
        check(!ls.fail(), ErrorKind::Parse,
              path + ":" + std::to_string(lineno) + ": bad feature row (column " + std::to_string(c) + ")");
        lg.graph.features(v, c) = static_cast<float>(x);
      }
    }
    lg.graph.validate();
    d.graphs.push_back(std::move(lg));
  }
  d.validate();

  if (verify_oracle && (d.name == "COLORS" || d.name == "TRIANGLES")) {
    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
      const int expect = d.name == "COLORS" ? count_green(d.graphs[i].graph)
                                            : count_triangles(d.graphs[i].graph);
      check(expect == d.graphs[i].label, ErrorKind::Parse,
            path + ": graph " + std::to_string(i) + " label " + std::to_string(d.graphs[i].label) +
                " fails oracle recheck (oracle says " + std::to_string(expect) + ")");
    }
  }
  return d;
}

std::vector<std::pair<int, int>> class_histogram(const Dataset& d) {
  std::map<int, int> hist;
  for (const auto& lg : d.graphs) ++hist[lg.label];
  return {hist.begin(), hist.end()};
}

}  // namespace graphaug
