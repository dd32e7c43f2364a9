#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "graphaug/common.hpp"

namespace graphaug::nn {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Directed row pairs: out.row(dst[k]) += in.row(src[k]). Used for neighbor
// aggregation over flat (possibly batched) node index spaces.
struct RowPairs {
  std::vector<int> src, dst;
  int out_rows = 0;
};

// Reverse-mode autodiff tape over dense matrices. A tape is built per forward
// pass (or per batch); backward() walks it once in reverse. Ops whose inputs
// carry no gradient record no closure, so no-grad forwards cost only the math.
template <typename T>
class Tape {
 public:
  struct Node {
    Mat<T> value;
    Mat<T> grad;  // empty until a gradient reaches this node
    std::function<void()> backward;
    bool needs_grad = false;
  };

  int add_node(Mat<T> value, bool needs_grad, std::function<void()> backward = nullptr) {
    Node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad;
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }
  int size() const { return static_cast<int>(nodes_.size()); }
  void clear() { nodes_.clear(); }

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss_id` must be a 1x1 node.
  void backward(int loss_id) {
    check_arg(nodes_[loss_id].value.size() == 1, "backward: loss must be scalar");
    nodes_[loss_id].grad = Mat<T>::Constant(1, 1, T(1));
    for (int i = loss_id; i >= 0; --i) {
      Node& n = nodes_[i];
      if (n.backward && n.grad.size() != 0) n.backward();
    }
  }

  static void accum(Mat<T>& g, const Mat<T>& delta) {
    if (g.size() == 0)
      g = delta;
    else
      g += delta;
  }

 private:
  std::vector<Node> nodes_;
};

template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  int id = -1;

  const Mat<T>& value() const { return tape->node(id).value; }
  Mat<T>& grad() const { return tape->node(id).grad; }
  bool needs_grad() const { return tape->node(id).needs_grad; }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool valid() const { return tape != nullptr; }
};

// --- leaves ----------------------------------------------------------------

template <typename T>
Var<T> leaf(Tape<T>& tape, Mat<T> value, bool needs_grad) {
  return {&tape, tape.add_node(std::move(value), needs_grad)};
}

// Accepts any Eigen expression convertible to Mat<T>; T comes from the tape.
template <typename T, typename M>
Var<T> constant(Tape<T>& tape, M&& value) {
  return leaf(tape, Mat<T>(std::forward<M>(value)), false);
}

namespace detail {

template <typename T>
Var<T> unary(Var<T> a, Mat<T> value, std::function<void(Tape<T>&, int, int)> back) {
  Tape<T>& tp = *a.tape;
  const bool ng = a.needs_grad();
  const int id = tp.add_node(std::move(value), ng);
  if (ng) {
    Tape<T>* tpp = &tp;
    const int aid = a.id;
    tp.node(id).backward = [tpp, id, aid, back]() { back(*tpp, id, aid); };
  }
  return {&tp, id};
}

template <typename T>
Var<T> binary(Var<T> a, Var<T> b, Mat<T> value, std::function<void(Tape<T>&, int, int, int)> back) {
  check_arg(a.tape == b.tape, "autodiff: mixed tapes");
  Tape<T>& tp = *a.tape;
  const bool ng = a.needs_grad() || b.needs_grad();
  const int id = tp.add_node(std::move(value), ng);
  if (ng) {
    Tape<T>* tpp = &tp;
    const int aid = a.id, bid = b.id;
    tp.node(id).backward = [tpp, id, aid, bid, back]() { back(*tpp, id, aid, bid); };
  }
  return {&tp, id};
}

}  // namespace detail

// --- arithmetic --------------------------------------------------------------

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  check_arg(a.cols() == b.rows(), "matmul: inner dims mismatch");
  return detail::binary<T>(a, b, a.value() * b.value(), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, g * t.node(bid).value.transpose());
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, t.node(aid).value.transpose() * g);
  });
}

// a * b^T
template <typename T>
Var<T> matmul_bt(Var<T> a, Var<T> b) {
  check_arg(a.cols() == b.cols(), "matmul_bt: column dims mismatch");
  return detail::binary<T>(a, b, a.value() * b.value().transpose(),
                           [](Tape<T>& t, int id, int aid, int bid) {
                             const Mat<T>& g = t.node(id).grad;
                             if (t.node(aid).needs_grad)
                               Tape<T>::accum(t.node(aid).grad, g * t.node(bid).value);
                             if (t.node(bid).needs_grad)
                               Tape<T>::accum(t.node(bid).grad, g.transpose() * t.node(aid).value);
                           });
}

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
  check_arg(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  return detail::binary<T>(a, b, a.value() + b.value(), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, g);
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, g);
  });
}

// a (n x c) + row vector b (1 x c) broadcast over rows
template <typename T>
Var<T> add_rowvec(Var<T> a, Var<T> b) {
  check_arg(b.rows() == 1 && a.cols() == b.cols(), "add_rowvec: shape mismatch");
  Mat<T> v = a.value();
  v.rowwise() += b.value().row(0);
  return detail::binary<T>(a, b, std::move(v), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, g);
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, g.colwise().sum());
  });
}

template <typename T>
Var<T> sub(Var<T> a, Var<T> b) {
  check_arg(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
  return detail::binary<T>(a, b, a.value() - b.value(), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, g);
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, Mat<T>(-g));
  });
}

template <typename T>
Var<T> cmul(Var<T> a, Var<T> b) {
  check_arg(a.rows() == b.rows() && a.cols() == b.cols(), "cmul: shape mismatch");
  return detail::binary<T>(a, b, a.value().cwiseProduct(b.value()),
                           [](Tape<T>& t, int id, int aid, int bid) {
                             const Mat<T>& g = t.node(id).grad;
                             if (t.node(aid).needs_grad)
                               Tape<T>::accum(t.node(aid).grad, g.cwiseProduct(t.node(bid).value));
                             if (t.node(bid).needs_grad)
                               Tape<T>::accum(t.node(bid).grad, g.cwiseProduct(t.node(aid).value));
                           });
}

template <typename T>
Var<T> scale(Var<T> a, T s) {
  return detail::unary<T>(a, a.value() * s, [s](Tape<T>& t, int id, int aid) {
    Tape<T>::accum(t.node(aid).grad, Mat<T>(t.node(id).grad * s));
  });
}

// a scaled by a 1x1 variable s (trainable scalar, e.g. GIN epsilon)
template <typename T>
Var<T> scale_var(Var<T> a, Var<T> s) {
  check_arg(s.rows() == 1 && s.cols() == 1, "scale_var: scalar must be 1x1");
  const T sv = s.value()(0, 0);
  return detail::binary<T>(a, s, Mat<T>(a.value() * sv), [](Tape<T>& t, int id, int aid, int sid) {
    const Mat<T>& g = t.node(id).grad;
    const T sval = t.node(sid).value(0, 0);
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, Mat<T>(g * sval));
    if (t.node(sid).needs_grad)
      Tape<T>::accum(t.node(sid).grad,
                     Mat<T>(Mat<T>::Constant(1, 1, (g.cwiseProduct(t.node(aid).value)).sum())));
  });
}

template <typename T>
Var<T> add_scalar(Var<T> a, T s) {
  return detail::unary<T>(a, Mat<T>(a.value().array() + s), [](Tape<T>& t, int id, int aid) {
    Tape<T>::accum(t.node(aid).grad, t.node(id).grad);
  });
}

template <typename T>
Var<T> one_minus(Var<T> a) {
  return detail::unary<T>(a, Mat<T>((T(1) - a.value().array()).matrix()),
                          [](Tape<T>& t, int id, int aid) {
                            Tape<T>::accum(t.node(aid).grad, Mat<T>(-t.node(id).grad));
                          });
}

// --- nonlinearities -----------------------------------------------------------

template <typename T>
Var<T> relu(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(a.value().cwiseMax(T(0))), [](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    const Mat<T>& x = t.node(aid).value;
    Tape<T>::accum(t.node(aid).grad,
                   Mat<T>((x.array() > T(0)).template cast<T>() * g.array()));
  });
}

template <typename T>
Var<T> sigmoid(Var<T> a) {
  Mat<T> v = (T(1) / (T(1) + (-a.value().array()).exp())).matrix();
  return detail::unary<T>(a, std::move(v), [](Tape<T>& t, int id, int aid) {
    const auto& s = t.node(id).value.array();
    Tape<T>::accum(t.node(aid).grad, Mat<T>((t.node(id).grad.array() * s * (T(1) - s)).matrix()));
  });
}

template <typename T>
Var<T> tanh_(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(a.value().array().tanh().matrix()),
                          [](Tape<T>& t, int id, int aid) {
                            const auto& y = t.node(id).value.array();
                            Tape<T>::accum(t.node(aid).grad,
                                           Mat<T>((t.node(id).grad.array() * (T(1) - y * y)).matrix()));
                          });
}

// natural log; caller guarantees positive input (use clamp first)
template <typename T>
Var<T> log_(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(a.value().array().log().matrix()),
                          [](Tape<T>& t, int id, int aid) {
                            Tape<T>::accum(t.node(aid).grad,
                                           Mat<T>(t.node(id).grad.cwiseQuotient(t.node(aid).value)));
                          });
}

// clamp with pass-through gradient strictly inside (lo, hi)
template <typename T>
Var<T> clamp(Var<T> a, T lo, T hi) {
  return detail::unary<T>(a, Mat<T>(a.value().cwiseMax(lo).cwiseMin(hi)),
                          [lo, hi](Tape<T>& t, int id, int aid) {
                            const auto& x = t.node(aid).value.array();
                            const auto inside = (x > lo && x < hi).template cast<T>();
                            Tape<T>::accum(t.node(aid).grad,
                                           Mat<T>((inside * t.node(id).grad.array()).matrix()));
                          });
}

template <typename T>
Var<T> abs_(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(a.value().cwiseAbs()), [](Tape<T>& t, int id, int aid) {
    const auto& x = t.node(aid).value.array();
    const auto sign = (x > T(0)).template cast<T>() - (x < T(0)).template cast<T>();
    Tape<T>::accum(t.node(aid).grad, Mat<T>((sign * t.node(id).grad.array()).matrix()));
  });
}

// --- softmax -------------------------------------------------------------------

template <typename T>
Var<T> softmax_rows(Var<T> a) {
  Mat<T> v = a.value();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    auto row = v.row(r).array();
    row -= row.maxCoeff();
    row = row.exp();
    row /= row.sum();
  }
  return detail::unary<T>(a, std::move(v), [](Tape<T>& t, int id, int aid) {
    const Mat<T>& s = t.node(id).value;
    const Mat<T>& g = t.node(id).grad;
    Mat<T> d(s.rows(), s.cols());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      const T dot = g.row(r).cwiseProduct(s.row(r)).sum();
      d.row(r) = s.row(r).cwiseProduct(g.row(r) - Mat<T>::Constant(1, s.cols(), dot));
    }
    Tape<T>::accum(t.node(aid).grad, d);
  });
}

template <typename T>
Var<T> log_softmax_rows(Var<T> a) {
  Mat<T> v = a.value();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    auto row = v.row(r).array();
    const T m = row.maxCoeff();
    const T lse = m + std::log((row - m).exp().sum());
    row -= lse;
  }
  return detail::unary<T>(a, std::move(v), [](Tape<T>& t, int id, int aid) {
    const Mat<T>& y = t.node(id).value;
    const Mat<T>& g = t.node(id).grad;
    Mat<T> d(y.rows(), y.cols());
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const T gsum = g.row(r).sum();
      d.row(r) = g.row(r) - (y.row(r).array().exp() * gsum).matrix();
    }
    Tape<T>::accum(t.node(aid).grad, d);
  });
}

// --- reductions -------------------------------------------------------------------

template <typename T>
Var<T> sum_all(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(Mat<T>::Constant(1, 1, a.value().sum())),
                          [](Tape<T>& t, int id, int aid) {
                            const T g = t.node(id).grad(0, 0);
                            Tape<T>::accum(t.node(aid).grad,
                                           Mat<T>(Mat<T>::Constant(t.node(aid).value.rows(),
                                                                   t.node(aid).value.cols(), g)));
                          });
}

template <typename T>
Var<T> mean_all(Var<T> a) {
  const T inv = T(1) / static_cast<T>(a.value().size());
  return scale(sum_all(a), inv);
}

// sum over rows -> 1 x c (graph readout building block)
template <typename T>
Var<T> reduce_rows_sum(Var<T> a) {
  return detail::unary<T>(a, Mat<T>(a.value().colwise().sum()), [](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;  // 1 x c
    Mat<T> d(t.node(aid).value.rows(), t.node(aid).value.cols());
    d.rowwise() = g.row(0);
    Tape<T>::accum(t.node(aid).grad, d);
  });
}

template <typename T>
Var<T> reduce_rows_mean(Var<T> a) {
  check_arg(a.rows() > 0, "reduce_rows_mean: empty input");
  return scale(reduce_rows_sum(a), T(1) / static_cast<T>(a.rows()));
}

template <typename T>
Var<T> reduce_rows_max(Var<T> a) {
  check_arg(a.rows() > 0, "reduce_rows_max: empty input");
  const Mat<T>& x = a.value();
  Mat<T> v(1, x.cols());
  std::vector<int> arg(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::Index r;
    v(0, c) = x.col(c).maxCoeff(&r);
    arg[static_cast<std::size_t>(c)] = static_cast<int>(r);
  }
  return detail::unary<T>(a, std::move(v), [arg](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T> d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (Eigen::Index c = 0; c < d.cols(); ++c)
      d(arg[static_cast<std::size_t>(c)], c) += g(0, c);
    Tape<T>::accum(t.node(aid).grad, d);
  });
}

// --- gather / scatter / segments ------------------------------------------------

template <typename T>
Var<T> gather_rows(Var<T> a, std::vector<int> idx) {
  Mat<T> v(static_cast<Eigen::Index>(idx.size()), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = a.value().row(idx[i]);
  return detail::unary<T>(a, std::move(v), [idx = std::move(idx)](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) d.row(idx[i]) += g.row(static_cast<Eigen::Index>(i));
  });
}

// elements a(r_i, c_i) as an m x 1 column
template <typename T>
Var<T> gather_elems(Var<T> a, std::vector<std::pair<int, int>> coords) {
  Mat<T> v(static_cast<Eigen::Index>(coords.size()), 1);
  for (std::size_t i = 0; i < coords.size(); ++i)
    v(static_cast<Eigen::Index>(i), 0) = a.value()(coords[i].first, coords[i].second);
  return detail::unary<T>(a, std::move(v), [coords = std::move(coords)](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (std::size_t i = 0; i < coords.size(); ++i)
      d(coords[i].first, coords[i].second) += g(static_cast<Eigen::Index>(i), 0);
  });
}

template <typename T>
Var<T> concat_rows(Var<T> a, Var<T> b) {
  check_arg(a.cols() == b.cols(), "concat_rows: column mismatch");
  Mat<T> v(a.rows() + b.rows(), a.cols());
  v.topRows(a.rows()) = a.value();
  v.bottomRows(b.rows()) = b.value();
  return detail::binary<T>(a, b, std::move(v), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    const Eigen::Index ar = t.node(aid).value.rows();
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, Mat<T>(g.topRows(ar)));
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, Mat<T>(g.bottomRows(g.rows() - ar)));
  });
}

template <typename T>
Var<T> concat_cols(Var<T> a, Var<T> b) {
  check_arg(a.rows() == b.rows(), "concat_cols: row mismatch");
  Mat<T> v(a.rows(), a.cols() + b.cols());
  v.leftCols(a.cols()) = a.value();
  v.rightCols(b.cols()) = b.value();
  return detail::binary<T>(a, b, std::move(v), [](Tape<T>& t, int id, int aid, int bid) {
    const Mat<T>& g = t.node(id).grad;
    const Eigen::Index ac = t.node(aid).value.cols();
    if (t.node(aid).needs_grad) Tape<T>::accum(t.node(aid).grad, Mat<T>(g.leftCols(ac)));
    if (t.node(bid).needs_grad) Tape<T>::accum(t.node(bid).grad, Mat<T>(g.rightCols(g.cols() - ac)));
  });
}

template <typename T>
Var<T> slice_rows(Var<T> a, int start, int count) {
  check_arg(start >= 0 && start + count <= a.rows(), "slice_rows: out of range");
  return detail::unary<T>(a, Mat<T>(a.value().middleRows(start, count)),
                          [start, count](Tape<T>& t, int id, int aid) {
                            Mat<T>& d = t.node(aid).grad;
                            if (d.size() == 0)
                              d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
                            d.middleRows(start, count) += t.node(id).grad;
                          });
}

// out.row(dst[k]) += a.row(src[k]); neighbor-sum aggregation
template <typename T>
Var<T> pair_accumulate(Var<T> a, std::shared_ptr<const RowPairs> pairs) {
  Mat<T> v = Mat<T>::Zero(pairs->out_rows, a.cols());
  for (std::size_t k = 0; k < pairs->src.size(); ++k) v.row(pairs->dst[k]) += a.value().row(pairs->src[k]);
  return detail::unary<T>(a, std::move(v), [pairs](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (std::size_t k = 0; k < pairs->src.size(); ++k) d.row(pairs->src[k]) += g.row(pairs->dst[k]);
  });
}

// weighted variant for normalized propagation (GCN)
struct WeightedRowPairs {
  std::vector<int> src, dst;
  std::vector<double> weight;
  int out_rows = 0;
};

template <typename T>
Var<T> weighted_pair_accumulate(Var<T> a, std::shared_ptr<const WeightedRowPairs> pairs) {
  Mat<T> v = Mat<T>::Zero(pairs->out_rows, a.cols());
  for (std::size_t k = 0; k < pairs->src.size(); ++k)
    v.row(pairs->dst[k]) += static_cast<T>(pairs->weight[k]) * a.value().row(pairs->src[k]);
  return detail::unary<T>(a, std::move(v), [pairs](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (std::size_t k = 0; k < pairs->src.size(); ++k)
      d.row(pairs->src[k]) += static_cast<T>(pairs->weight[k]) * g.row(pairs->dst[k]);
  });
}

// per-segment readout: rows with segment id s reduce into output row s
template <typename T>
Var<T> segment_sum(Var<T> a, std::vector<int> seg, int n_segments) {
  check_arg(static_cast<Eigen::Index>(seg.size()) == a.rows(), "segment_sum: segment ids mismatch");
  Mat<T> v = Mat<T>::Zero(n_segments, a.cols());
  for (std::size_t i = 0; i < seg.size(); ++i) v.row(seg[i]) += a.value().row(static_cast<Eigen::Index>(i));
  return detail::unary<T>(a, std::move(v), [seg = std::move(seg)](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (std::size_t i = 0; i < seg.size(); ++i) d.row(static_cast<Eigen::Index>(i)) += g.row(seg[i]);
  });
}

template <typename T>
Var<T> segment_mean(Var<T> a, const std::vector<int>& seg, int n_segments) {
  std::vector<T> inv_count(static_cast<std::size_t>(n_segments), T(0));
  for (int s : seg) inv_count[static_cast<std::size_t>(s)] += T(1);
  for (auto& c : inv_count) {
    check_arg(c > T(0), "segment_mean: empty segment");
    c = T(1) / c;
  }
  std::vector<int> seg_copy = seg;
  Var<T> sums = segment_sum(a, std::move(seg_copy), n_segments);
  Mat<T> v = sums.value();
  for (Eigen::Index r = 0; r < v.rows(); ++r) v.row(r) *= inv_count[static_cast<std::size_t>(r)];
  return detail::unary<T>(sums, std::move(v), [inv_count = std::move(inv_count)](Tape<T>& t, int id, int aid) {
    Mat<T> d = t.node(id).grad;
    for (Eigen::Index r = 0; r < d.rows(); ++r) d.row(r) *= inv_count[static_cast<std::size_t>(r)];
    Tape<T>::accum(t.node(aid).grad, d);
  });
}

template <typename T>
Var<T> segment_max(Var<T> a, const std::vector<int>& seg, int n_segments) {
  const Mat<T>& x = a.value();
  Mat<T> v = Mat<T>::Constant(n_segments, x.cols(), -std::numeric_limits<T>::infinity());
  std::vector<int> arg(static_cast<std::size_t>(n_segments) * static_cast<std::size_t>(x.cols()), -1);
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const int s = seg[i];
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const T val = x(static_cast<Eigen::Index>(i), c);
      if (val > v(s, c)) {
        v(s, c) = val;
        arg[static_cast<std::size_t>(s) * x.cols() + static_cast<std::size_t>(c)] = static_cast<int>(i);
      }
    }
  }
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    check_arg(arg[static_cast<std::size_t>(r) * x.cols()] >= 0, "segment_max: empty segment");
  return detail::unary<T>(a, std::move(v), [arg = std::move(arg)](Tape<T>& t, int id, int aid) {
    const Mat<T>& g = t.node(id).grad;
    Mat<T>& d = t.node(aid).grad;
    if (d.size() == 0) d = Mat<T>::Zero(t.node(aid).value.rows(), t.node(aid).value.cols());
    for (Eigen::Index s = 0; s < g.rows(); ++s)
      for (Eigen::Index c = 0; c < g.cols(); ++c)
        d(arg[static_cast<std::size_t>(s) * g.cols() + static_cast<std::size_t>(c)], c) += g(s, c);
  });
}

}  // namespace graphaug::nn
