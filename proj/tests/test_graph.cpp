#include <doctest.h>

#include "graphaug/graph.hpp"
#include "test_util.hpp"

using namespace graphaug;

TEST_CASE("add_virtual_node connects the new node to every original node") {
  Graph g;
  g.num_nodes = 2;
  g.features = Eigen::MatrixXf::Zero(2, 3);
  const Eigen::VectorXf init = Eigen::VectorXf::Constant(3, 0.5f);

  const Graph out = add_virtual_node(g, init);
  CHECK(out.num_nodes == 3);
  CHECK(out.edges == std::vector<Edge>{{0, 2}, {1, 2}});
  CHECK(out.features.row(2) == init.transpose());
  CHECK(out.features.topRows(2) == g.features);
}

TEST_CASE("add_virtual_node on the empty graph yields one isolated node") {
  Graph g;
  g.features.resize(0, 2);
  const Graph out = add_virtual_node(g, Eigen::VectorXf::Zero(2));
  CHECK(out.num_nodes == 1);
  CHECK(out.edges.empty());
}

TEST_CASE("add_virtual_node on K3 gives 6 edges") {
  const Graph g = test_util::complete_graph(3, 2);
  const Graph out = add_virtual_node(g, Eigen::VectorXf::Zero(2));
  CHECK(out.num_nodes == 4);
  CHECK(out.edges.size() == 6);
  out.validate();
}

TEST_CASE("add_virtual_node adds exactly num_nodes edges") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = test_util::random_graph(rng, 1, 15, 0.3, 2);
    const Graph out = add_virtual_node(g, Eigen::VectorXf::Zero(2));
    CHECK(out.edges.size() == g.edges.size() + static_cast<std::size_t>(g.num_nodes));
    out.validate();
  }
}

TEST_CASE("remove_nodes drops incident edges and re-indexes stably") {
  Graph g = test_util::path_graph(3, 2);
  g.features << 0, 1, 2, 3, 4, 5;

  const Graph out = remove_nodes(g, {1});
  CHECK(out.num_nodes == 2);
  CHECK(out.edges.empty());
  CHECK(out.features(0, 0) == 0.0f);
  CHECK(out.features(1, 0) == 4.0f);  // node 2 became node 1, features follow
}

TEST_CASE("remove_nodes with empty drop set is the identity") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = test_util::random_graph(rng, 0, 12, 0.4, 3);
    CHECK(remove_nodes(g, {}) == g);
  }
}

TEST_CASE("remove_nodes K4 minus one node is K3") {
  const Graph out = remove_nodes(test_util::complete_graph(4), {3});
  CHECK(out == test_util::complete_graph(3));
}

TEST_CASE("remove_nodes rejects out-of-range indices") {
  const Graph g = test_util::path_graph(3);
  CHECK_THROWS_AS(remove_nodes(g, {5}), Error);
}

TEST_CASE("adjacency is symmetric, zero-diagonal, and matches edges") {
  SUBCASE("K3") {
    const auto a = adjacency(test_util::complete_graph(3));
    CHECK(a.sum() == 6.0);
    CHECK(a.diagonal().sum() == 0.0);
  }
  SUBCASE("no edges") {
    Graph g;
    g.num_nodes = 4;
    g.features = Eigen::MatrixXf::Zero(4, 1);
    CHECK(adjacency(g).sum() == 0.0);
  }
  SUBCASE("path") {
    const auto a = adjacency(test_util::path_graph(3));
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 2) == 1.0);
    CHECK(a(0, 2) == 0.0);
    CHECK(a == a.transpose().eval());
  }
  SUBCASE("random graphs stay symmetric with zero trace") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = test_util::random_graph(rng, 1, 15, 0.3, 1);
      const auto a = adjacency(g);
      CHECK(a == a.transpose().eval());
      CHECK(a.trace() == 0.0);
    }
  }
}

TEST_CASE("validate rejects broken invariants") {
  Graph g = test_util::path_graph(3, 2);
  SUBCASE("feature row mismatch") {
    g.features.resize(2, 2);
    CHECK_THROWS_AS(g.validate(), Error);
  }
  SUBCASE("self loop") {
    g.edges.push_back({2, 2});
    CHECK_THROWS_AS(g.validate(), Error);
  }
  SUBCASE("endpoint out of range") {
    g.edges.push_back({2, 7});
    CHECK_THROWS_AS(g.validate(), Error);
  }
}

TEST_CASE("canonical_edges sorts, canonicalizes, dedups") {
  const auto edges = canonical_edges({{2, 0}, {0, 2}, {1, 0}});
  CHECK(edges == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK_THROWS_AS(canonical_edges({{1, 1}}), Error);
}
