// Central-difference verification of analytic gradients. The caller first
// runs one forward/backward so the parameter tensors hold analytic
// gradients, then hands over a loss closure that re-evaluates the forward
// value without touching gradients.
#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "msc/autodiff.hpp"

namespace msc {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coords_checked = 0;

  bool pass(double tol) const { return max_rel_err <= tol; }
};

// rel err = |g - fd| / max(|g| + |fd|, floor). Checks every coordinate of
// every tensor. The denominator floor sits at the central-difference noise
// scale: a double-precision loss evaluated at step h carries roundoff of
// roughly eps·|f|/h ≈ 1e-11, so coordinates whose gradients sink below the
// floor are held to that absolute accuracy instead of a meaningless ratio.
inline GradCheckReport check_gradients(std::span<Tensor* const> params,
                                       const std::function<double()>& loss,
                                       double h = 1e-5,
                                       double floor = 1e-6) {
  GradCheckReport rep;
  for (Tensor* t : params) {
    for (std::size_t k = 0; k < t->numel(); ++k) {
      const double saved = t->value[k];
      t->value[k] = saved + h;
      const double up = loss();
      t->value[k] = saved - h;
      const double down = loss();
      t->value[k] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double g = t->grad[k];
      const double rel = std::abs(g - fd) / std::max(std::abs(g) + std::abs(fd), floor);
      ++rep.coords_checked;
      if (rel > rep.max_rel_err) {
        rep.max_rel_err = rel;
        rep.worst_tensor = t->name;
        rep.worst_index = k;
        rep.analytic = g;
        rep.numeric = fd;
      }
    }
  }
  return rep;
}

}  // namespace msc
