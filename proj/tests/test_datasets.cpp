#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "graphaug/dataset.hpp"
#include "test_util.hpp"

using namespace graphaug;
namespace fs = std::filesystem;

namespace {

// independent oracle: trace(A^3) / 6
long trace_a3_triangles(const Graph& g) {
  const Eigen::MatrixXd a = adjacency(g);
  const Eigen::MatrixXd a3 = a * a * a;
  return std::lround(a3.trace() / 6.0);
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("graphaug_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("count_triangles on K3 and K4") {
  CHECK(count_triangles(test_util::complete_graph(3)) == 1);
  CHECK(count_triangles(test_util::complete_graph(4)) == 4);
  CHECK(count_triangles(test_util::path_graph(5)) == 0);
}

TEST_CASE("count_triangles agrees with trace(A^3)/6 on random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = test_util::random_graph(rng, 1, 25, rng.uniform(0.05, 0.6), 1);
    CHECK(count_triangles(g) == trace_a3_triangles(g));
  }
}

TEST_CASE("nodes_in_triangles and edges_in_triangles") {
  // K3 plus a pendant node 3 attached to node 0
  Graph g = test_util::complete_graph(3, 1);
  g.num_nodes = 4;
  g.edges.push_back({0, 3});
  g.features = Eigen::MatrixXf::Ones(4, 1);
  const auto nodes = nodes_in_triangles(g);
  CHECK(nodes == std::vector<char>{1, 1, 1, 0});
  const auto edges = edges_in_triangles(g);
  REQUIRE(edges.size() == 4);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    CHECK(edges[i] == (g.edges[i] != Edge{0, 3} ? 1 : 0));
}

TEST_CASE("count_green counts one-hot green nodes and rejects malformed rows") {
  Graph g;
  g.num_nodes = 7;
  g.features = Eigen::MatrixXf::Zero(7, 4);
  for (int v = 0; v < 7; ++v) g.features(v, v < 3 ? 1 : 0) = 1.0f;
  CHECK(count_green(g) == 3);

  Graph all_green = g;
  all_green.features.setZero();
  for (int v = 0; v < 7; ++v) all_green.features(v, 1) = 1.0f;
  CHECK(count_green(all_green) == 7);

  Graph none = g;
  none.features.setZero();
  for (int v = 0; v < 7; ++v) none.features(v, 2) = 1.0f;
  CHECK(count_green(none) == 0);

  SUBCASE("all-zero color block") {
    g.features.row(0).setZero();
    CHECK_THROWS_AS(count_green(g), Error);
  }
  SUBCASE("two-hot color block") {
    g.features(0, 0) = g.features(0, 2) = 1.0f;
    CHECK_THROWS_AS(count_green(g), Error);
  }
  SUBCASE("fractional color entry") {
    g.features(0, 0) = 0.5f;
    CHECK_THROWS_AS(count_green(g), Error);
  }
}

TEST_CASE("gen_colors satisfies its label oracle and is deterministic") {
  const Dataset a = gen_colors(50, {4, 20}, 123);
  const Dataset b = gen_colors(50, {4, 20}, 123);
  const Dataset c = gen_colors(50, {4, 20}, 124);
  CHECK(a.size() == 50);
  CHECK(a.num_classes == 10);
  CHECK(a.feature_dim == 4);
  a.validate();
  for (const auto& lg : a.graphs) {
    CHECK(lg.label == count_green(lg.graph));
    CHECK(lg.label >= 1);
    CHECK(lg.label <= 10);
    for (int v = 0; v < lg.graph.num_nodes; ++v) {
      CHECK(lg.graph.features(v, 3) >= 0.0f);
      CHECK(lg.graph.features(v, 3) < 1.0f);
    }
  }
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK(a.graphs[i].graph == b.graphs[i].graph);
  bool any_diff = false;
  for (int i = 0; i < a.size(); ++i)
    if (!(a.graphs[i].graph == c.graphs[i].graph)) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("gen_colors rejects an infeasible node range") {
  CHECK_THROWS_AS(gen_colors(5, {0, 0}, 1), Error);
  CHECK_THROWS_AS(gen_colors(5, {10, 4}, 1), Error);
}

TEST_CASE("gen_triangles satisfies its label oracle and is deterministic") {
  const Dataset a = gen_triangles(40, {8, 25}, 5);
  const Dataset b = gen_triangles(40, {8, 25}, 5);
  CHECK(a.size() == 40);
  CHECK(a.feature_dim == 1);
  for (const auto& lg : a.graphs) CHECK((lg.graph.features.array() == 1.0f).all());
  a.validate();
  for (const auto& lg : a.graphs) {
    CHECK(lg.label == count_triangles(lg.graph));
    CHECK(lg.label >= 1);
    CHECK(lg.label <= 10);
  }
  for (int i = 0; i < a.size(); ++i) CHECK(a.graphs[i].graph == b.graphs[i].graph);
  CHECK_THROWS_AS(gen_triangles(5, {2, 2}, 1), Error);  // no triangle possible
}

TEST_CASE("tu parser reads the bundled MUTAG-style fixture") {
  TuParseStats stats;
  const Dataset d = parse_tu_dataset(std::string(GRAPHAUG_TEST_DATA_DIR) + "/mutag_mini", 64, &stats);
  CHECK(d.name == "MUTAG_mini");
  CHECK(d.size() == 6);  // one graph per distinct indicator id
  CHECK(d.num_classes == 2);
  CHECK(d.feature_dim == 3);  // one-hot over node labels {0,1,2}
  CHECK(stats.self_loops_dropped == 0);
  CHECK(stats.duplicate_edges_collapsed == 21);  // each undirected edge listed twice

  const std::vector<int> expect_nodes = {3, 4, 4, 4, 4, 4};
  const std::vector<std::size_t> expect_edges = {3, 3, 4, 3, 6, 2};
  const std::vector<int> expect_labels = {2, 1, 2, 1, 2, 1};  // {-1,1} -> {1,2}
  for (int i = 0; i < 6; ++i) {
    CHECK(d.graphs[i].graph.num_nodes == expect_nodes[i]);
    CHECK(d.graphs[i].graph.edges.size() == expect_edges[i]);
    CHECK(d.graphs[i].label == expect_labels[i]);
  }
  // node labels one-hot: first node of graph 1 has label 0
  CHECK(d.graphs[0].graph.features(0, 0) == 1.0f);
  CHECK(d.graphs[0].graph.features(2, 1) == 1.0f);
}

TEST_CASE("tu parser error paths name the file") {
  const fs::path dir = temp_dir("tu_errors");

  SUBCASE("missing required files") {
    CHECK_THROWS_WITH_AS(parse_tu_dataset(dir.string()), doctest::Contains("_A.txt"), Error);
  }
  SUBCASE("non-numeric field points at file and line") {
    write_file(dir / "X_A.txt", "1, 2\n");
    write_file(dir / "X_graph_indicator.txt", "1\nbogus\n");
    write_file(dir / "X_graph_labels.txt", "1\n");
    try {
      parse_tu_dataset(dir.string());
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("X_graph_indicator.txt:2") != std::string::npos);
    }
  }
  SUBCASE("node index out of range") {
    write_file(dir / "X_A.txt", "1, 9\n");
    write_file(dir / "X_graph_indicator.txt", "1\n1\n");
    write_file(dir / "X_graph_labels.txt", "1\n");
    CHECK_THROWS_AS(parse_tu_dataset(dir.string()), Error);
  }
  SUBCASE("self loops dropped with a count, duplicates collapsed") {
    write_file(dir / "X_A.txt", "1, 2\n2, 1\n1, 1\n");
    write_file(dir / "X_graph_indicator.txt", "1\n1\n");
    write_file(dir / "X_graph_labels.txt", "4\n");
    TuParseStats stats;
    const Dataset d = parse_tu_dataset(dir.string(), 64, &stats);
    CHECK(stats.self_loops_dropped == 1);
    CHECK(stats.duplicate_edges_collapsed == 1);
    CHECK(d.graphs[0].graph.edges.size() == 1);
  }
  SUBCASE("degree fallback features when no labels or attributes") {
    write_file(dir / "X_A.txt", "1, 2\n2, 3\n");
    write_file(dir / "X_graph_indicator.txt", "1\n1\n1\n");
    write_file(dir / "X_graph_labels.txt", "0\n");
    const Dataset d = parse_tu_dataset(dir.string());
    CHECK(d.feature_dim == 3);  // degrees 0..2 present
    CHECK(d.graphs[0].graph.features(1, 2) == 1.0f);
    CHECK(d.graphs[0].graph.features(0, 1) == 1.0f);
  }
  SUBCASE("node attributes appended after one-hot labels") {
    write_file(dir / "X_A.txt", "1, 2\n");
    write_file(dir / "X_graph_indicator.txt", "1\n1\n");
    write_file(dir / "X_graph_labels.txt", "1\n");
    write_file(dir / "X_node_labels.txt", "7\n9\n");
    write_file(dir / "X_node_attributes.txt", "0.5, 1.5\n2.5, 3.5\n");
    const Dataset d = parse_tu_dataset(dir.string());
    CHECK(d.feature_dim == 4);
    CHECK(d.graphs[0].graph.features(0, 0) == 1.0f);
    CHECK(d.graphs[0].graph.features(1, 1) == 1.0f);
    CHECK(d.graphs[0].graph.features(0, 2) == 0.5f);
    CHECK(d.graphs[0].graph.features(1, 3) == 3.5f);
  }
  fs::remove_all(dir);
}

TEST_CASE("kfold splits are stratified, disjoint, covering, deterministic") {
  Rng rng(99);
  std::vector<int> labels;
  for (int i = 0; i < 173; ++i) labels.push_back(rng.uniform_int(1, 4));

  const SplitSpec spec = kfold_splits(labels, 10, 21);
  const SplitSpec again = kfold_splits(labels, 10, 21);
  CHECK(spec.fold_of == again.fold_of);

  // per-fold, per-label histogram within +-1 of proportional
  std::map<int, int> label_total;
  for (int l : labels) ++label_total[l];
  for (int fold = 0; fold < 10; ++fold) {
    std::map<int, int> hist;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (spec.fold_of[i] == fold) ++hist[labels[i]];
    for (const auto& [label, total] : label_total) {
      const double expect = total / 10.0;
      CHECK(hist[label] >= static_cast<int>(std::floor(expect)) - 1);
      CHECK(hist[label] <= static_cast<int>(std::ceil(expect)) + 1);
    }
  }

  for (int fold = 0; fold < 10; ++fold) {
    const Split s = resolve_fold(spec, fold);
    std::set<int> seen;
    for (int i : s.train) seen.insert(i);
    for (int i : s.val) seen.insert(i);
    for (int i : s.test) seen.insert(i);
    CHECK(seen.size() == labels.size());
    CHECK(s.train.size() + s.val.size() + s.test.size() == labels.size());
  }
}

TEST_CASE("kfold with n == folds puts one element per fold") {
  std::vector<int> labels(10, 1);
  labels[3] = labels[7] = 2;
  const SplitSpec spec = kfold_splits(labels, 10, 1);
  std::set<int> folds(spec.fold_of.begin(), spec.fold_of.end());
  CHECK(folds.size() == 10);
  CHECK_THROWS_AS(kfold_splits(labels, 11, 1), Error);
  CHECK_THROWS_AS(kfold_splits(labels, 1, 1), Error);
}

TEST_CASE("dataset save/load round-trips and re-verifies oracles") {
  const fs::path dir = temp_dir("serialize");
  const Dataset d = gen_colors(25, {4, 15}, 42);
  const std::string path = (dir / "colors.txt").string();
  save_dataset(d, path);
  const Dataset loaded = load_dataset(path);
  REQUIRE(loaded.size() == d.size());
  CHECK(loaded.name == d.name);
  CHECK(loaded.num_classes == d.num_classes);
  for (int i = 0; i < d.size(); ++i) {
    CHECK(loaded.graphs[i].graph == d.graphs[i].graph);
    CHECK(loaded.graphs[i].label == d.graphs[i].label);
  }

  SUBCASE("tampered label fails the oracle recheck") {
    Dataset bad = d;
    bad.graphs[0].label = bad.graphs[0].label == 1 ? 2 : 1;
    const std::string bad_path = (dir / "bad.txt").string();
    save_dataset(bad, bad_path);
    CHECK_THROWS_WITH_AS(load_dataset(bad_path), doctest::Contains("oracle"), Error);
    CHECK_NOTHROW(load_dataset(bad_path, false));
  }
  fs::remove_all(dir);
}

TEST_CASE("class histogram sums to dataset size") {
  const Dataset d = gen_triangles(30, {8, 20}, 2);
  int total = 0;
  for (const auto& [label, count] : class_histogram(d)) total += count;
  CHECK(total == 30);
}
