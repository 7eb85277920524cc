// AMSGrad without bias correction:
//   m ← β1 m + (1-β1) g        v ← β2 v + (1-β2) g²
//   v̂ ← max(v̂, v)             θ ← θ - lr · m / (√v̂ + ε)
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "msc/autodiff.hpp"

namespace msc {

struct AmsGradConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AmsGrad {
 public:
  AmsGrad(std::vector<Tensor*> params, AmsGradConfig cfg = {})
      : params_(std::move(params)), cfg_(cfg) {
    // lr = 0 is a legal no-op configuration (moments update, θ stays put).
    if (cfg_.lr < 0.0) throw std::invalid_argument("learning rate must be non-negative");
    m_.resize(params_.size());
    v_.resize(params_.size());
    vhat_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const std::size_t n = params_[i]->numel();
      m_[i].assign(n, 0.0);
      v_[i].assign(n, 0.0);
      vhat_[i].assign(n, 0.0);
    }
  }

  void zero_grad() {
    for (Tensor* t : params_) t->zero_grad();
  }

  // One update from the gradients currently held in the parameter tensors.
  void step() {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Tensor& t = *params_[i];
      double* m = m_[i].data();
      double* v = v_[i].data();
      double* vh = vhat_[i].data();
      const std::size_t n = t.numel();
      for (std::size_t k = 0; k < n; ++k) {
        const double g = t.grad[k];
        if (!std::isfinite(g))
          throw NumericError("non-finite gradient in " + t.name);
        m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g;
        v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g * g;
        if (v[k] > vh[k]) vh[k] = v[k];
        t.value[k] -= cfg_.lr * m[k] / (std::sqrt(vh[k]) + cfg_.eps);
      }
    }
  }

  const AmsGradConfig& config() const { return cfg_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<const double> vhat(std::size_t param) const { return vhat_[param]; }
  std::span<const double> second_moment(std::size_t param) const { return v_[param]; }

 private:
  std::vector<Tensor*> params_;
  AmsGradConfig cfg_;
  std::vector<Vec> m_, v_, vhat_;
};

}  // namespace msc
