// GRU building blocks in two forms: tape builders for training and plain
// value-level evaluation for inference. Both follow the same update:
//   z = σ(Wz x + Uz h + bz)
//   r = σ(Wr x + Ur h + br)
//   h~ = tanh(Wh x + Uh (r ⊙ h) + bh)
//   h' = (1 - z) ⊙ h + z ⊙ h~
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "msc/autodiff.hpp"

namespace msc {

struct GruParams {
  Tensor wz, uz, bz;
  Tensor wr, ur, br;
  Tensor wh, uh, bh;

  GruParams() = default;
  GruParams(const std::string& prefix, std::size_t input, std::size_t hidden)
      : wz(prefix + ".wz", {hidden, input}),
        uz(prefix + ".uz", {hidden, hidden}),
        bz(prefix + ".bz", {hidden}),
        wr(prefix + ".wr", {hidden, input}),
        ur(prefix + ".ur", {hidden, hidden}),
        br(prefix + ".br", {hidden}),
        wh(prefix + ".wh", {hidden, input}),
        uh(prefix + ".uh", {hidden, hidden}),
        bh(prefix + ".bh", {hidden}) {}

  std::size_t hidden() const { return bz.numel(); }
  std::size_t input() const { return wz.cols(); }

  void init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden()));
    for (Tensor* t : tensors()) t->fill_uniform(rng, -bound, bound);
  }

  std::array<Tensor*, 9> tensors() {
    return {&wz, &uz, &bz, &wr, &ur, &br, &wh, &uh, &bh};
  }
  std::array<const Tensor*, 9> tensors() const {
    return {&wz, &uz, &bz, &wr, &ur, &br, &wh, &uh, &bh};
  }
};

// --- tape form --------------------------------------------------------------

inline ad::Var gru_step(ad::Tape& tape, GruParams& p, ad::Var x, ad::Var h) {
  const ad::Var z = tape.sigmoid(tape.lin2(p.wz, x, p.uz, h, p.bz));
  const ad::Var r = tape.sigmoid(tape.lin2(p.wr, x, p.ur, h, p.br));
  const ad::Var rh = tape.mul(r, h);
  const ad::Var cand = tape.tanh(tape.lin2(p.wh, x, p.uh, rh, p.bh));
  return tape.blend(z, h, cand);
}

// Runs the left-to-right and right-to-left passes over a step sequence and
// returns per-step concatenations [fwd_t ; bwd_t]. Initial states are zero.
inline std::vector<ad::Var> gru_bidirectional(ad::Tape& tape, GruParams& fwd,
                                              GruParams& bwd,
                                              std::span<const ad::Var> steps) {
  const std::size_t n = steps.size();
  std::vector<ad::Var> f(n), b(n);
  ad::Var h = tape.zeros(fwd.hidden());
  for (std::size_t t = 0; t < n; ++t) {
    h = gru_step(tape, fwd, steps[t], h);
    f[t] = h;
  }
  h = tape.zeros(bwd.hidden());
  for (std::size_t t = n; t-- > 0;) {
    h = gru_step(tape, bwd, steps[t], h);
    b[t] = h;
  }
  std::vector<ad::Var> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::array<ad::Var, 2> parts{f[t], b[t]};
    out[t] = tape.concat(parts);
  }
  return out;
}

// --- value form -------------------------------------------------------------

inline void affine_into(const Tensor& w, const Tensor& b,
                        std::span<const double> x, std::span<double> out) {
  const std::size_t rows = w.rows(), cols = w.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = w.value.data() + i * cols;
    double acc = b.value[i];
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vec gru_cell(const GruParams& p, std::span<const double> x,
                    std::span<const double> h) {
  const std::size_t hd = p.hidden(), in = p.input();
  auto gate = [&](const Tensor& w, const Tensor& u, const Tensor& b,
                  std::span<const double> hs, std::size_t i) {
    const double* wrow = w.value.data() + i * in;
    const double* urow = u.value.data() + i * hd;
    double acc = b.value[i];
    for (std::size_t j = 0; j < in; ++j) acc += wrow[j] * x[j];
    for (std::size_t j = 0; j < hd; ++j) acc += urow[j] * hs[j];
    return acc;
  };
  Vec z(hd), r(hd), out(hd);
  for (std::size_t i = 0; i < hd; ++i) z[i] = sigmoid(gate(p.wz, p.uz, p.bz, h, i));
  for (std::size_t i = 0; i < hd; ++i) r[i] = sigmoid(gate(p.wr, p.ur, p.br, h, i));
  Vec rh(hd);
  for (std::size_t i = 0; i < hd; ++i) rh[i] = r[i] * h[i];
  for (std::size_t i = 0; i < hd; ++i) {
    const double cand = std::tanh(gate(p.wh, p.uh, p.bh, rh, i));
    out[i] = (1.0 - z[i]) * h[i] + z[i] * cand;
  }
  return out;
}

// Value-level counterpart of gru_bidirectional: returns n rows of
// [fwd_t ; bwd_t], each of length fwd.hidden() + bwd.hidden().
inline std::vector<Vec> gru_bidirectional_values(
    const GruParams& fwd, const GruParams& bwd,
    const std::vector<Vec>& steps) {
  const std::size_t n = steps.size();
  std::vector<Vec> f(n), b(n);
  Vec h(fwd.hidden(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    h = gru_cell(fwd, steps[t], h);
    f[t] = h;
  }
  h.assign(bwd.hidden(), 0.0);
  for (std::size_t t = n; t-- > 0;) {
    h = gru_cell(bwd, steps[t], h);
    b[t] = h;
  }
  std::vector<Vec> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = f[t];
    out[t].insert(out[t].end(), b[t].begin(), b[t].end());
  }
  return out;
}

// Mean over elements of -w (y log x + (1-y) log(1-x)) with the same clamp
// as the tape op.
inline double bce_value(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w = {}) {
  if (x.size() != y.size())
    throw std::invalid_argument("bce_value: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    if (xi < ad::Tape::kBceClamp) xi = ad::Tape::kBceClamp;
    if (xi > 1.0 - ad::Tape::kBceClamp) xi = 1.0 - ad::Tape::kBceClamp;
    const double wi = w.empty() ? 1.0 : w[i];
    acc += -wi * (y[i] * std::log(xi) + (1.0 - y[i]) * std::log1p(-xi));
  }
  return acc / static_cast<double>(x.size());
}

}  // namespace msc
