#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "graphaug/reward.hpp"
#include "test_util.hpp"

using namespace graphaug;

namespace {

MatchingConfig tiny_config(int feature_dim, std::uint64_t seed = 1) {
  MatchingConfig cfg;
  cfg.feature_dim = feature_dim;
  cfg.layers = 2;
  cfg.hidden = 24;
  cfg.init_seed = seed;
  return cfg;
}

// the score head's last layer starts at zero; tests that must see varied
// scores fill it with small random values first
template <typename T>
void randomize_score_head(graphaug::MatchingEncoder<T>& model, std::uint64_t seed) {
  Rng rng(seed);
  auto& store = model.params();
  auto& w = store.values[static_cast<std::size_t>(store.find("match.out.w1"))];
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = static_cast<T>(rng.normal() * 0.1);
}

}  // namespace

TEST_CASE("cross_graph_message: single other node gives h_v - h_u") {
  Eigen::VectorXd h_v(3), h_u(3);
  h_v << 1, 2, 3;
  h_u << 0.5, -1, 2;
  Eigen::MatrixXd other(1, 3);
  other.row(0) = h_u;
  const auto msg = cross_graph_message(h_v, other);
  CHECK(msg.weights.size() == 1);
  CHECK(msg.weights(0) == doctest::Approx(1.0));
  CHECK((msg.message - (h_v - h_u)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cross_graph_message: identical rows give a zero message") {
  Eigen::VectorXd h_v(4);
  h_v << 0.3, -0.2, 1.0, 0.8;
  Eigen::MatrixXd other(5, 4);
  for (int i = 0; i < 5; ++i) other.row(i) = h_v;
  const auto msg = cross_graph_message(h_v, other);
  CHECK(msg.message.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(msg.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cross_graph_message: attention weights sum to one on random inputs") {
  Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd h_v(6);
    Eigen::MatrixXd other(rng.uniform_int(1, 9), 6);
    for (int i = 0; i < 6; ++i) h_v(i) = rng.normal();
    for (int r = 0; r < other.rows(); ++r)
      for (int c = 0; c < 6; ++c) other(r, c) = rng.normal();
    const auto msg = cross_graph_message(h_v, other);
    CHECK(msg.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(msg.weights.minCoeff() >= 0.0);
  }
}

TEST_CASE("matching forward: symmetric, in (0,1), and shape-checked") {
  Rng rng(82);
  MatchingEncoder<float> model(tiny_config(3));
  randomize_score_head(model, 820);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g1 = test_util::random_graph(rng, 1, 12, 0.4, 3);
    const Graph g2 = test_util::random_graph(rng, 1, 12, 0.4, 3);
    const double s12 = model.score(g1, g2);
    const double s21 = model.score(g2, g1);
    CHECK(s12 > 0.0);
    CHECK(s12 < 1.0);
    CHECK(std::abs(s12 - s21) < 1e-5);
  }

  SUBCASE("s(g, g) equals the sigmoid head at the zero vector for every g") {
    const Graph a = test_util::random_graph(rng, 2, 10, 0.4, 3);
    const Graph b = test_util::random_graph(rng, 2, 10, 0.4, 3);
    CHECK(model.score(a, a) == doctest::Approx(model.score(b, b)).epsilon(1e-9));
  }
  SUBCASE("feature dim mismatch") {
    const Graph a = test_util::random_graph(rng, 2, 6, 0.4, 3);
    const Graph bad = test_util::random_graph(rng, 2, 6, 0.4, 5);
    CHECK_THROWS_AS(model.score(a, bad), Error);
  }
  SUBCASE("empty graph") {
    const Graph a = test_util::random_graph(rng, 2, 6, 0.4, 3);
    Graph empty;
    empty.features.resize(0, 3);
    CHECK_THROWS_AS(model.score(a, empty), Error);
  }
}

TEST_CASE("no-cross-graph ablation still scores symmetrically") {
  Rng rng(83);
  MatchingConfig cfg = tiny_config(3);
  cfg.cross_graph = false;
  MatchingEncoder<float> model(cfg);
  randomize_score_head(model, 830);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g1 = test_util::random_graph(rng, 1, 10, 0.4, 3);
    const Graph g2 = test_util::random_graph(rng, 1, 10, 0.4, 3);
    CHECK(std::abs(model.score(g1, g2) - model.score(g2, g1)) < 1e-5);
  }
}

TEST_CASE("matching network gradient check") {
  Rng rng(84);
  MatchingConfig cfg;
  cfg.feature_dim = 2;
  cfg.layers = 2;
  cfg.hidden = 5;
  MatchingEncoder<double> model(cfg);
  randomize_score_head(model, 840);
  const Graph g1 = test_util::random_graph(rng, 3, 5, 0.6, 2);
  const Graph g2 = test_util::random_graph(rng, 3, 5, 0.6, 2);
  const double err = test_util::max_grad_rel_error(
      model.params(), [&](nn::Tape<double>& tape, const std::vector<nn::Var<double>>& bound) {
        return model.forward(tape, bound, g1, g2);
      });
  CHECK(err < 1e-4);
}

TEST_CASE("sample_pairs: balanced, label-correct, deterministic") {
  const Dataset d = gen_colors(60, {4, 15}, 85);
  std::vector<int> pool;
  for (int i = 0; i < d.size(); ++i) pool.push_back(i);

  Rng rng(86);
  const auto pairs = sample_pairs(d, pool, 100, rng);
  REQUIRE(pairs.size() == 100);
  int positives = 0;
  for (const auto& p : pairs) {
    const bool same = d.graphs[static_cast<std::size_t>(p.first)].label ==
                      d.graphs[static_cast<std::size_t>(p.second)].label;
    CHECK(same == p.same_label);
    positives += p.same_label;
  }
  CHECK(positives == 50);

  Rng rng2(86);
  const auto again = sample_pairs(d, pool, 100, rng2);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].first == again[i].first);
    CHECK(pairs[i].second == again[i].second);
  }
}

TEST_CASE("sample_pairs rejects a single-label pool") {
  Dataset d = gen_colors(20, {4, 10}, 87);
  std::vector<int> pool;
  for (int i = 0; i < d.size(); ++i)
    if (d.graphs[static_cast<std::size_t>(i)].label == d.graphs[0].label) pool.push_back(i);
  Rng rng(88);
  CHECK_THROWS_AS(sample_pairs(d, pool, 10, rng), Error);
}

TEST_CASE("train_reward_model: first batch loss is near ln 2 and training reduces it") {
  const Dataset d = gen_colors(240, {4, 14}, 89);
  std::vector<int> pool;
  for (int i = 0; i < 200; ++i) pool.push_back(i);

  MatchingEncoder<float> model(tiny_config(4, 90));
  RewardTrainConfig cfg;
  cfg.epochs = 4;
  cfg.pairs_per_epoch = 200;
  cfg.batch_size = 32;
  cfg.lr = 3e-4;
  cfg.seed = 91;
  const RewardTrainResult result = train_reward_model(model, d, pool, cfg);

  CHECK(std::abs(result.first_batch_loss - std::log(2.0)) < 0.2);
  CHECK(result.epoch_loss.back() < result.epoch_loss.front());
  CHECK(result.steps == 4 * 7);  // ceil(200/32) batches per epoch

  SUBCASE("held-out pairs score better than chance after training") {
    std::vector<int> heldout;
    for (int i = 200; i < 240; ++i) heldout.push_back(i);
    Rng rng(92);
    const auto pairs = sample_pairs(d, heldout, 60, rng);
    const double acc = evaluate_pairs(model, d, pairs);
    CHECK(acc > 0.5);
  }
}

TEST_CASE("train_reward_model replays deterministically") {
  const Dataset d = gen_colors(80, {4, 12}, 93);
  std::vector<int> pool;
  for (int i = 0; i < d.size(); ++i) pool.push_back(i);
  RewardTrainConfig cfg;
  cfg.epochs = 2;
  cfg.pairs_per_epoch = 64;
  cfg.seed = 94;

  MatchingEncoder<float> a(tiny_config(4, 95));
  MatchingEncoder<float> b(tiny_config(4, 95));
  const auto ra = train_reward_model(a, d, pool, cfg);
  const auto rb = train_reward_model(b, d, pool, cfg);
  CHECK(ra.epoch_loss == rb.epoch_loss);
  CHECK(a.score(d.graphs[0].graph, d.graphs[1].graph) ==
        b.score(d.graphs[0].graph, d.graphs[1].graph));
}

TEST_CASE("pair evaluation writes a CSV report") {
  const Dataset d = gen_colors(30, {4, 10}, 96);
  std::vector<int> pool;
  for (int i = 0; i < d.size(); ++i) pool.push_back(i);
  MatchingEncoder<float> model(tiny_config(4));
  Rng rng(97);
  const auto pairs = sample_pairs(d, pool, 10, rng);
  const auto path = std::filesystem::temp_directory_path() / "graphaug_pair_eval.csv";
  evaluate_pairs(model, d, pairs, path.string());
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 11);  // header + 10 pairs
  std::filesystem::remove(path);
}

TEST_CASE("reward checkpoint round-trips") {
  const Dataset d = gen_colors(4, {6, 10}, 98);
  MatchingEncoder<float> model(tiny_config(4, 99));
  const auto path = std::filesystem::temp_directory_path() / "graphaug_reward_test.ckpt";
  model.save(path.string(), 17);
  const MatchingEncoder<float> loaded = MatchingEncoder<float>::load(path.string());
  CHECK(loaded.score(d.graphs[0].graph, d.graphs[1].graph) ==
        model.score(d.graphs[0].graph, d.graphs[1].graph));
  CHECK(loaded.config().layers == model.config().layers);
  std::filesystem::remove(path);
}
