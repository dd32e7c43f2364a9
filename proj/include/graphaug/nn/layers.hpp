#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphaug/graph.hpp"
#include "graphaug/nn/tape.hpp"
#include "graphaug/rng.hpp"

namespace graphaug::nn {

// Named trainable parameters plus their gradient accumulators. A model owns
// one store; submodules register prefixed entries. Parameter count and shapes
// are fixed after construction.
template <typename T>
struct ParamStore {
  std::vector<std::string> names;
  std::vector<Mat<T>> values;
  std::vector<Mat<T>> grads;

  int add(const std::string& name, Mat<T> init) {
    check_arg(find(name) < 0, "param store: duplicate name " + name);
    names.push_back(name);
    grads.push_back(Mat<T>::Zero(init.rows(), init.cols()));
    values.push_back(std::move(init));
    return static_cast<int>(values.size()) - 1;
  }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::size_t count() const { return values.size(); }

  void zero_grads() {
    for (auto& g : grads) g.setZero();
  }
};

// Leases every parameter onto a tape as a leaf. Index-aligned with the store.
template <typename T>
std::vector<Var<T>> bind_params(Tape<T>& tape, const ParamStore<T>& store, bool with_grad) {
  std::vector<Var<T>> bound;
  bound.reserve(store.count());
  for (const auto& v : store.values) bound.push_back(leaf(tape, v, with_grad));
  return bound;
}

// Accumulates leaf gradients back into the store after backward().
template <typename T>
void harvest_grads(const std::vector<Var<T>>& bound, ParamStore<T>& store) {
  for (std::size_t i = 0; i < bound.size(); ++i)
    if (bound[i].grad().size() != 0) store.grads[i] += bound[i].grad();
}

// Uniform Glorot initialization for an (in x out) weight.
template <typename T>
Mat<T> glorot(int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  Mat<T> w(fan_in, fan_out);
  for (int r = 0; r < fan_in; ++r)
    for (int c = 0; c < fan_out; ++c) w(r, c) = static_cast<T>(rng.uniform(-limit, limit));
  return w;
}

enum class OutputActivation { None, Relu, Sigmoid, SoftmaxRows, Tanh };

// Fully connected stack with ReLU between hidden layers and a configurable
// terminal activation (softmax for the category head, sigmoid for Bernoulli
// heads and the reward output).
template <typename T>
class Mlp {
 public:
  Mlp() = default;
  Mlp(ParamStore<T>& store, const std::string& prefix, const std::vector<int>& widths,
      OutputActivation out, Rng& rng)
      : out_(out) {
    check_arg(widths.size() >= 2, "mlp: need at least input and output widths");
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      w_ids_.push_back(store.add(prefix + ".w" + std::to_string(l),
                                 glorot<T>(widths[l], widths[l + 1], rng)));
      b_ids_.push_back(store.add(prefix + ".b" + std::to_string(l), Mat<T>::Zero(1, widths[l + 1])));
    }
    in_width_ = widths.front();
    out_width_ = widths.back();
  }

  Var<T> forward(const std::vector<Var<T>>& bound, Var<T> x) const {
    check_arg(x.cols() == in_width_, "mlp: input width mismatch");
    Var<T> h = x;
    for (std::size_t l = 0; l < w_ids_.size(); ++l) {
      h = add_rowvec(matmul(h, bound[w_ids_[l]]), bound[b_ids_[l]]);
      if (l + 1 < w_ids_.size()) h = relu(h);
    }
    switch (out_) {
      case OutputActivation::None: return h;
      case OutputActivation::Relu: return relu(h);
      case OutputActivation::Sigmoid: return sigmoid(h);
      case OutputActivation::SoftmaxRows: return softmax_rows(h);
      case OutputActivation::Tanh: return tanh_(h);
    }
    return h;
  }

  int in_width() const { return in_width_; }
  int out_width() const { return out_width_; }

 private:
  std::vector<int> w_ids_, b_ids_;
  OutputActivation out_ = OutputActivation::None;
  int in_width_ = 0, out_width_ = 0;
};

// Neighbor index pairs (both directions of every undirected edge) over a
// graph's own node index space.
inline std::shared_ptr<RowPairs> adjacency_pairs(const Graph& g) {
  auto pairs = std::make_shared<RowPairs>();
  pairs->out_rows = g.num_nodes;
  pairs->src.reserve(g.edges.size() * 2);
  pairs->dst.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) {
    pairs->src.push_back(e.first);
    pairs->dst.push_back(e.second);
    pairs->src.push_back(e.second);
    pairs->dst.push_back(e.first);
  }
  return pairs;
}

// Symmetric-normalized adjacency with self-loops: D^{-1/2} (A+I) D^{-1/2}.
inline std::shared_ptr<WeightedRowPairs> normalized_adjacency_pairs(const Graph& g) {
  auto pairs = std::make_shared<WeightedRowPairs>();
  pairs->out_rows = g.num_nodes;
  const auto deg = degrees(g);
  std::vector<double> inv_sqrt(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(deg[i] + 1.0);
  for (int v = 0; v < g.num_nodes; ++v) {
    pairs->src.push_back(v);
    pairs->dst.push_back(v);
    pairs->weight.push_back(inv_sqrt[v] * inv_sqrt[v]);
  }
  for (const Edge& e : g.edges) {
    const double w = inv_sqrt[e.first] * inv_sqrt[e.second];
    pairs->src.push_back(e.first);
    pairs->dst.push_back(e.second);
    pairs->weight.push_back(w);
    pairs->src.push_back(e.second);
    pairs->dst.push_back(e.first);
    pairs->weight.push_back(w);
  }
  return pairs;
}

// GIN message passing: h'_v = MLP((1+eps) h_v + sum_{j in N(v)} h_j) with
// trainable eps (init 0) and a 2-layer inner MLP.
template <typename T>
class GinLayer {
 public:
  GinLayer() = default;
  GinLayer(ParamStore<T>& store, const std::string& prefix, int in, int out, Rng& rng)
      : mlp_(store, prefix + ".mlp", {in, out, out}, OutputActivation::None, rng),
        eps_id_(store.add(prefix + ".eps", Mat<T>::Zero(1, 1))) {}

  Var<T> forward(const std::vector<Var<T>>& bound, Var<T> h,
                 const std::shared_ptr<const RowPairs>& adj) const {
    Var<T> agg = pair_accumulate(h, adj);
    Var<T> pre = add(add(h, scale_var(h, bound[eps_id_])), agg);
    return mlp_.forward(bound, pre);
  }

 private:
  Mlp<T> mlp_;
  int eps_id_ = -1;
};

// GCN layer: ReLU(Ahat h W + b) with Ahat precomputed per graph.
template <typename T>
class GcnLayer {
 public:
  GcnLayer() = default;
  GcnLayer(ParamStore<T>& store, const std::string& prefix, int in, int out, Rng& rng)
      : w_id_(store.add(prefix + ".w", glorot<T>(in, out, rng))),
        b_id_(store.add(prefix + ".b", Mat<T>::Zero(1, out))) {}

  Var<T> forward(const std::vector<Var<T>>& bound, Var<T> h,
                 const std::shared_ptr<const WeightedRowPairs>& norm_adj) const {
    Var<T> prop = weighted_pair_accumulate(h, norm_adj);
    return relu(add_rowvec(matmul(prop, bound[w_id_]), bound[b_id_]));
  }

 private:
  int w_id_ = -1, b_id_ = -1;
};

// Standard gated recurrent cell over 1 x width row vectors.
template <typename T>
class GruCell {
 public:
  GruCell() = default;
  GruCell(ParamStore<T>& store, const std::string& prefix, int in, int hidden, Rng& rng)
      : in_(in), hidden_(hidden) {
    const char* gates[3] = {"r", "z", "n"};
    for (int k = 0; k < 3; ++k) {
      wi_[k] = store.add(prefix + ".wi" + gates[k], glorot<T>(in, hidden, rng));
      wh_[k] = store.add(prefix + ".wh" + gates[k], glorot<T>(hidden, hidden, rng));
      bi_[k] = store.add(prefix + ".bi" + gates[k], Mat<T>::Zero(1, hidden));
      bh_[k] = store.add(prefix + ".bh" + gates[k], Mat<T>::Zero(1, hidden));
    }
  }

  Var<T> forward(const std::vector<Var<T>>& bound, Var<T> h_prev, Var<T> x) const {
    check_arg(x.cols() == in_ && h_prev.cols() == hidden_, "gru: width mismatch");
    auto affine = [&](int k) {
      return add(add_rowvec(matmul(x, bound[wi_[k]]), bound[bi_[k]]),
                 add_rowvec(matmul(h_prev, bound[wh_[k]]), bound[bh_[k]]));
    };
    Var<T> r = sigmoid(affine(0));
    Var<T> z = sigmoid(affine(1));
    Var<T> n = tanh_(add(add_rowvec(matmul(x, bound[wi_[2]]), bound[bi_[2]]),
                         cmul(r, add_rowvec(matmul(h_prev, bound[wh_[2]]), bound[bh_[2]]))));
    return add(cmul(one_minus(z), n), cmul(z, h_prev));
  }

  int hidden() const { return hidden_; }

 private:
  int wi_[3] = {-1, -1, -1}, wh_[3] = {-1, -1, -1}, bi_[3] = {-1, -1, -1}, bh_[3] = {-1, -1, -1};
  int in_ = 0, hidden_ = 0;
};

enum class Readout { Sum, Mean, Max };

Readout parse_readout(const std::string& s);
std::string readout_name(Readout r);

template <typename T>
Var<T> readout(Var<T> h, Readout mode) {
  switch (mode) {
    case Readout::Sum: return reduce_rows_sum(h);
    case Readout::Mean: return reduce_rows_mean(h);
    case Readout::Max: return reduce_rows_max(h);
  }
  fail(ErrorKind::Internal, "readout: bad mode");
}

template <typename T>
Var<T> segment_readout(Var<T> h, const std::vector<int>& seg, int n_segments, Readout mode) {
  switch (mode) {
    case Readout::Sum: return segment_sum(h, seg, n_segments);
    case Readout::Mean: return segment_mean(h, seg, n_segments);
    case Readout::Max: return segment_max(h, seg, n_segments);
  }
  fail(ErrorKind::Internal, "segment_readout: bad mode");
}

}  // namespace graphaug::nn
