#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "graphaug/nn/layers.hpp"

namespace graphaug::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam over a ParamStore's gradients. Throws Error(Divergence) on non-finite
// gradients. One moment pair per parameter, bias-corrected.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(ParamStore<T>& store) {
    if (m_.empty()) {
      for (const auto& v : store.values) {
        m_.push_back(Mat<T>::Zero(v.rows(), v.cols()));
        v_.push_back(Mat<T>::Zero(v.rows(), v.cols()));
      }
    }
    ++t_;
    const T b1 = static_cast<T>(cfg_.beta1);
    const T b2 = static_cast<T>(cfg_.beta2);
    const T corr1 = T(1) - static_cast<T>(std::pow(cfg_.beta1, t_));
    const T corr2 = T(1) - static_cast<T>(std::pow(cfg_.beta2, t_));
    for (std::size_t i = 0; i < store.values.size(); ++i) {
      const Mat<T>& g = store.grads[i];
      check(g.allFinite(), ErrorKind::Divergence,
            "adam: non-finite gradient for parameter " + store.names[i]);
      m_[i] = b1 * m_[i] + (T(1) - b1) * g;
      v_[i] = b2 * v_[i] + (T(1) - b2) * g.cwiseProduct(g);
      const auto m_hat = m_[i].array() / corr1;
      const auto v_hat = v_[i].array() / corr2;
      store.values[i].array() -=
          static_cast<T>(cfg_.lr) * m_hat / (v_hat.sqrt() + static_cast<T>(cfg_.eps));
    }
  }

  int step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<Mat<T>> m_, v_;
  int t_ = 0;
};

// --- checkpoints -------------------------------------------------------------
//
// Self-describing binary container: magic + version, a JSON metadata block
// (architecture config, seed, step count), then named parameter blobs stored
// as row-major little-endian float32.

struct Checkpoint {
  std::vector<std::pair<std::string, Eigen::MatrixXf>> params;
  std::string metadata_json;
};

void save_checkpoint_raw(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint_raw(const std::string& path);

template <typename T>
void save_checkpoint(const ParamStore<T>& store, const std::string& metadata_json,
                     const std::string& path) {
  Checkpoint ckpt;
  ckpt.metadata_json = metadata_json;
  for (std::size_t i = 0; i < store.count(); ++i)
    ckpt.params.emplace_back(store.names[i], store.values[i].template cast<float>());
  save_checkpoint_raw(ckpt, path);
}

// Restores values into an already-constructed store; names and shapes must
// match exactly.
template <typename T>
void restore_params(ParamStore<T>& store, const Checkpoint& ckpt) {
  check_arg(ckpt.params.size() == store.count(), "checkpoint: parameter count mismatch");
  for (const auto& [name, value] : ckpt.params) {
    const int i = store.find(name);
    check_arg(i >= 0, "checkpoint: unknown parameter " + name);
    check_arg(value.rows() == store.values[i].rows() && value.cols() == store.values[i].cols(),
              "checkpoint: shape mismatch for " + name);
    store.values[i] = value.template cast<T>();
  }
}

}  // namespace graphaug::nn
