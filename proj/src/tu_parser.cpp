#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphaug/dataset.hpp"

namespace graphaug {

namespace fs = std::filesystem;

namespace {

struct Line {
  std::string text;
  int number;
};

std::vector<Line> read_lines(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), ErrorKind::Io, "tu parser: cannot open " + path);
  std::vector<Line> lines;
  std::string s;
  int number = 0;
  while (std::getline(in, s)) {
    ++number;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    // trailing blank lines are tolerated, interior content keeps its line number
    if (s.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back({s, number});
  }
  return lines;
}

long parse_int_field(const std::string& s, const std::string& path, int lineno) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    check(pos == s.size(), ErrorKind::Parse, "");
    return v;
  } catch (...) {
    fail(ErrorKind::Parse,
         path + ":" + std::to_string(lineno) + ": non-numeric field '" + s + "'");
  }
}

double parse_real_field(const std::string& s, const std::string& path, int lineno) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    check(pos == s.size(), ErrorKind::Parse, "");
    return v;
  } catch (...) {
    fail(ErrorKind::Parse,
         path + ":" + std::to_string(lineno) + ": non-numeric field '" + s + "'");
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset parse_tu_dataset(const std::string& directory, int degree_cap, TuParseStats* stats) {
  check(fs::is_directory(directory), ErrorKind::Io,
        "tu parser: not a directory: " + directory);

  // locate the dataset prefix via the required *_A.txt file
  std::string prefix;
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = "_A.txt";
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      check(prefix.empty(), ErrorKind::Parse,
            "tu parser: multiple *_A.txt files in " + directory);
      prefix = name.substr(0, name.size() - suffix.size());
    }
  }
  check(!prefix.empty(), ErrorKind::Io, "tu parser: missing required <DS>_A.txt in " + directory);

  const std::string base = (fs::path(directory) / prefix).string();
  const std::string a_path = base + "_A.txt";
  const std::string ind_path = base + "_graph_indicator.txt";
  const std::string glab_path = base + "_graph_labels.txt";
  const std::string nlab_path = base + "_node_labels.txt";
  const std::string nattr_path = base + "_node_attributes.txt";
  check(fs::exists(ind_path), ErrorKind::Io, "tu parser: missing required file " + ind_path);
  check(fs::exists(glab_path), ErrorKind::Io, "tu parser: missing required file " + glab_path);

  // graph indicator: node i (1-indexed) -> graph id
  const auto ind_lines = read_lines(ind_path);
  const int n_nodes_total = static_cast<int>(ind_lines.size());
  std::vector<long> node_graph_raw(n_nodes_total);
  for (int i = 0; i < n_nodes_total; ++i)
    node_graph_raw[i] = parse_int_field(ind_lines[i].text, ind_path, ind_lines[i].number);

  std::vector<long> graph_ids(node_graph_raw);
  std::sort(graph_ids.begin(), graph_ids.end());
  graph_ids.erase(std::unique(graph_ids.begin(), graph_ids.end()), graph_ids.end());
  std::map<long, int> graph_index;
  for (std::size_t i = 0; i < graph_ids.size(); ++i) graph_index[graph_ids[i]] = static_cast<int>(i);
  const int n_graphs = static_cast<int>(graph_ids.size());

  // local node indexing: order within each graph by global node id
  std::vector<int> node_graph(n_nodes_total), node_local(n_nodes_total);
  std::vector<int> graph_size(n_graphs, 0);
  for (int i = 0; i < n_nodes_total; ++i) {
    const int gi = graph_index.at(node_graph_raw[i]);
    node_graph[i] = gi;
    node_local[i] = graph_size[gi]++;
  }

  // graph labels, remapped sorted-unique -> {1..k}
  const auto glab_lines = read_lines(glab_path);
  check(static_cast<int>(glab_lines.size()) == n_graphs, ErrorKind::Parse,
        glab_path + ": " + std::to_string(glab_lines.size()) + " labels for " +
            std::to_string(n_graphs) + " graphs");
  std::vector<long> raw_labels(n_graphs);
  for (int i = 0; i < n_graphs; ++i)
    raw_labels[i] = parse_int_field(glab_lines[i].text, glab_path, glab_lines[i].number);
  std::vector<long> label_values(raw_labels);
  std::sort(label_values.begin(), label_values.end());
  label_values.erase(std::unique(label_values.begin(), label_values.end()), label_values.end());
  std::map<long, int> label_map;
  for (std::size_t i = 0; i < label_values.size(); ++i)
    label_map[label_values[i]] = static_cast<int>(i) + 1;

  // edges
  TuParseStats local_stats;
  std::vector<std::set<Edge>> edge_sets(n_graphs);
  const auto a_lines = read_lines(a_path);
  for (const Line& line : a_lines) {
    const auto fields = split_csv(line.text);
    check(fields.size() == 2, ErrorKind::Parse,
          a_path + ":" + std::to_string(line.number) + ": expected 'u, v', got '" + line.text + "'");
    const long u = parse_int_field(fields[0], a_path, line.number);
    const long v = parse_int_field(fields[1], a_path, line.number);
    check(u >= 1 && u <= n_nodes_total && v >= 1 && v <= n_nodes_total, ErrorKind::Parse,
          a_path + ":" + std::to_string(line.number) + ": node index out of range");
    const int ui = static_cast<int>(u) - 1;
    const int vi = static_cast<int>(v) - 1;
    check(node_graph[ui] == node_graph[vi], ErrorKind::Parse,
          a_path + ":" + std::to_string(line.number) + ": edge endpoints in different graphs");
    if (ui == vi) {
      ++local_stats.self_loops_dropped;
      continue;
    }
    const Edge e = make_edge(node_local[ui], node_local[vi]);
    if (!edge_sets[node_graph[ui]].insert(e).second) ++local_stats.duplicate_edges_collapsed;
  }

  // features: node labels one-hot, attributes appended; degree fallback
  const bool have_nlab = fs::exists(nlab_path);
  const bool have_attr = fs::exists(nattr_path);

  std::vector<long> node_labels;
  std::map<long, int> nlab_map;
  if (have_nlab) {
    const auto lines = read_lines(nlab_path);
    check(static_cast<int>(lines.size()) == n_nodes_total, ErrorKind::Parse,
          nlab_path + ": " + std::to_string(lines.size()) + " rows for " +
              std::to_string(n_nodes_total) + " nodes");
    node_labels.resize(n_nodes_total);
    for (int i = 0; i < n_nodes_total; ++i)
      node_labels[i] = parse_int_field(lines[i].text, nlab_path, lines[i].number);
    std::vector<long> values(node_labels);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) nlab_map[values[i]] = static_cast<int>(i);
  }

  std::vector<std::vector<double>> node_attrs;
  int attr_dim = 0;
  if (have_attr) {
    const auto lines = read_lines(nattr_path);
    check(static_cast<int>(lines.size()) == n_nodes_total, ErrorKind::Parse,
          nattr_path + ": " + std::to_string(lines.size()) + " rows for " +
              std::to_string(n_nodes_total) + " nodes");
    node_attrs.resize(n_nodes_total);
    for (int i = 0; i < n_nodes_total; ++i) {
      for (const std::string& f : split_csv(lines[i].text))
        node_attrs[i].push_back(parse_real_field(f, nattr_path, lines[i].number));
      if (i == 0)
        attr_dim = static_cast<int>(node_attrs[0].size());
      else
        check(static_cast<int>(node_attrs[i].size()) == attr_dim, ErrorKind::Parse,
              nattr_path + ":" + std::to_string(lines[i].number) + ": inconsistent attribute count");
    }
  }

  Dataset d;
  d.name = prefix;
  d.num_classes = static_cast<int>(label_values.size());
  d.graphs.resize(n_graphs);
  for (int gi = 0; gi < n_graphs; ++gi) {
    Graph& g = d.graphs[gi].graph;
    g.num_nodes = graph_size[gi];
    g.edges.assign(edge_sets[gi].begin(), edge_sets[gi].end());
    d.graphs[gi].label = label_map.at(raw_labels[gi]);
  }

  if (have_nlab || have_attr) {
    const int onehot_dim = have_nlab ? static_cast<int>(nlab_map.size()) : 0;
    d.feature_dim = onehot_dim + attr_dim;
    for (int gi = 0; gi < n_graphs; ++gi)
      d.graphs[gi].graph.features = Eigen::MatrixXf::Zero(graph_size[gi], d.feature_dim);
    for (int i = 0; i < n_nodes_total; ++i) {
      auto& feats = d.graphs[node_graph[i]].graph.features;
      if (have_nlab) feats(node_local[i], nlab_map.at(node_labels[i])) = 1.0f;
      for (int c = 0; c < attr_dim; ++c)
        feats(node_local[i], onehot_dim + c) = static_cast<float>(node_attrs[i][c]);
    }
  } else {
    // one-hot degree capped at degree_cap
    int max_deg = 0;
    std::vector<std::vector<int>> degs(n_graphs);
    for (int gi = 0; gi < n_graphs; ++gi) {
      degs[gi] = degrees(d.graphs[gi].graph);
      for (int v : degs[gi]) max_deg = std::max(max_deg, v);
    }
    d.feature_dim = std::min(max_deg, degree_cap) + 1;
    for (int gi = 0; gi < n_graphs; ++gi) {
      Graph& g = d.graphs[gi].graph;
      g.features = Eigen::MatrixXf::Zero(g.num_nodes, d.feature_dim);
      for (int v = 0; v < g.num_nodes; ++v)
        g.features(v, std::min(degs[gi][v], degree_cap)) = 1.0f;
    }
  }

  d.validate();
  if (local_stats.self_loops_dropped > 0)
    std::cerr << "[graphaug] warning: " << prefix << ": dropped " << local_stats.self_loops_dropped
              << " self-loop(s)\n";
  if (stats) *stats = local_stats;
  return d;
}

}  // namespace graphaug
