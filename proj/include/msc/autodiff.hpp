// Minimal reverse-mode engine over vector-valued nodes. A Tape records the
// forward pass eagerly (values live in one arena), backward() walks the
// nodes in reverse creation order. Parameters are external Tensors whose
// .grad fields accumulate across backward calls, which is what mini-batch
// gradient accumulation needs.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msc/common.hpp"

namespace msc {

using Vec = std::vector<double>;

// Dense tensor of doubles, at most 2-D here. Row-major.
struct Tensor {
  std::vector<std::size_t> shape;
  Vec value;
  Vec grad;
  std::string name;

  Tensor() = default;
  Tensor(std::string name_, std::vector<std::size_t> shape_)
      : shape(std::move(shape_)), name(std::move(name_)) {
    value.assign(numel(), 0.0);
    grad.assign(numel(), 0.0);
  }

  std::size_t numel() const {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  void fill_uniform(Rng& rng, double lo, double hi) {
    for (auto& v : value) v = rng.uniform(lo, hi);
  }
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

  void check_finite() const {
    for (double v : value)
      if (!std::isfinite(v))
        throw NumericError("non-finite value in tensor " + name);
  }
};

inline void zero_grads(std::span<Tensor* const> params) {
  for (Tensor* t : params) t->zero_grad();
}

namespace ad {

using Var = std::int32_t;

enum class Op : std::uint8_t {
  kInput,      // external constant, no gradient flow
  kParam,      // whole tensor as a vector (biases, tests)
  kEmbedRow,   // one row of a 2-D tensor
  kMatVec,     // W a
  kAffine,     // W a + b
  kLin2,       // W a + U b + bias
  kAdd,        // a + b
  kMul,        // a ⊙ b
  kSigmoid,
  kTanh,
  kBlend,      // (1-a) ⊙ b + a ⊙ c
  kConcat,
  kMedianCols, // per-column median over parent rows
  kBce,        // clamped binary cross-entropy, mean over elements -> scalar
  kSum,        // sum of elements -> scalar
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void reset() {
    nodes_.clear();
    vals_.clear();
    grads_.clear();
    int_pool_.clear();
    dbl_pool_.clear();
  }

  std::size_t node_count() const { return nodes_.size(); }

  std::span<const double> value(Var v) const {
    const Node& n = node(v);
    return {vals_.data() + n.off, static_cast<std::size_t>(n.len)};
  }

  double scalar(Var v) const {
    const Node& n = node(v);
    if (n.len != 1)
      throw std::logic_error("scalar() on a node of length " +
                             std::to_string(n.len));
    return vals_[static_cast<std::size_t>(n.off)];
  }

  // Gradient of the last backward() target w.r.t. this node.
  std::span<const double> grad(Var v) const {
    const Node& n = node(v);
    if (grads_.size() != vals_.size())
      throw std::logic_error("grad() before backward()");
    return {grads_.data() + n.off, static_cast<std::size_t>(n.len)};
  }

  // --- graph construction (values are computed eagerly) --------------------

  Var input(std::span<const double> v) {
    Node n{};
    n.kind = Op::kInput;
    double* out = alloc(n, v.size());
    std::copy(v.begin(), v.end(), out);
    return push(n, "input");
  }

  Var zeros(std::size_t len) {
    Node n{};
    n.kind = Op::kInput;
    double* out = alloc(n, len);
    std::fill(out, out + len, 0.0);
    return push(n, "zeros");
  }

  Var param(Tensor& t) {
    Node n{};
    n.kind = Op::kParam;
    n.p0 = &t;
    double* out = alloc(n, t.numel());
    std::copy(t.value.begin(), t.value.end(), out);
    return push(n, "param");
  }

  Var embed_row(Tensor& table, std::size_t row) {
    if (table.shape.size() != 2 || row >= table.rows())
      throw std::invalid_argument("embed_row: row " + std::to_string(row) +
                                  " outside table " + table.name);
    Node n{};
    n.kind = Op::kEmbedRow;
    n.p0 = &table;
    n.aux = static_cast<std::int32_t>(row);
    const std::size_t d = table.cols();
    double* out = alloc(n, d);
    const double* src = table.value.data() + row * d;
    std::copy(src, src + d, out);
    return push(n, "embed_row");
  }

  Var matvec(Tensor& w, Var x) {
    check_matrix(w, len_of(x), "matvec");
    Node n{};
    n.kind = Op::kMatVec;
    n.p0 = &w;
    n.a = x;
    apply_matvec(n, w, x, nullptr, -1, nullptr);
    return push(n, "matvec");
  }

  Var affine(Tensor& w, Var x, Tensor& b) {
    check_matrix(w, len_of(x), "affine");
    check_bias(b, w.rows(), "affine");
    Node n{};
    n.kind = Op::kAffine;
    n.p0 = &w;
    n.p2 = &b;
    n.a = x;
    apply_matvec(n, w, x, nullptr, -1, &b);
    return push(n, "affine");
  }

  // W a + U b + bias: the recurrent-gate pre-activation shape.
  Var lin2(Tensor& w, Var a, Tensor& u, Var b, Tensor& bias) {
    check_matrix(w, len_of(a), "lin2");
    check_matrix(u, len_of(b), "lin2");
    if (w.rows() != u.rows())
      throw std::invalid_argument("lin2: W rows " + std::to_string(w.rows()) +
                                  " != U rows " + std::to_string(u.rows()));
    check_bias(bias, w.rows(), "lin2");
    Node n{};
    n.kind = Op::kLin2;
    n.p0 = &w;
    n.p1 = &u;
    n.p2 = &bias;
    n.a = a;
    n.b = b;
    apply_matvec(n, w, a, &u, b, &bias);
    return push(n, "lin2");
  }

  Var add(Var a, Var b) {
    require_same_len(a, b, "add");
    Node n{};
    n.kind = Op::kAdd;
    n.a = a;
    n.b = b;
    double* out = alloc(n, len_of(a));
    const double* pa = val_ptr(a);
    const double* pb = val_ptr(b);
    for (std::int32_t i = 0; i < n.len; ++i) out[i] = pa[i] + pb[i];
    return push(n, "add");
  }

  Var mul(Var a, Var b) {
    require_same_len(a, b, "mul");
    Node n{};
    n.kind = Op::kMul;
    n.a = a;
    n.b = b;
    double* out = alloc(n, len_of(a));
    const double* pa = val_ptr(a);
    const double* pb = val_ptr(b);
    for (std::int32_t i = 0; i < n.len; ++i) out[i] = pa[i] * pb[i];
    return push(n, "mul");
  }

  Var sigmoid(Var a) {
    Node n{};
    n.kind = Op::kSigmoid;
    n.a = a;
    double* out = alloc(n, len_of(a));
    const double* pa = val_ptr(a);
    for (std::int32_t i = 0; i < n.len; ++i)
      out[i] = 1.0 / (1.0 + std::exp(-pa[i]));
    return push(n, "sigmoid");
  }

  Var tanh(Var a) {
    Node n{};
    n.kind = Op::kTanh;
    n.a = a;
    double* out = alloc(n, len_of(a));
    const double* pa = val_ptr(a);
    for (std::int32_t i = 0; i < n.len; ++i) out[i] = std::tanh(pa[i]);
    return push(n, "tanh");
  }

  // (1-z) ⊙ h + z ⊙ cand, the recurrent state blend.
  Var blend(Var z, Var h, Var cand) {
    require_same_len(z, h, "blend");
    require_same_len(z, cand, "blend");
    Node n{};
    n.kind = Op::kBlend;
    n.a = z;
    n.b = h;
    n.c = cand;
    double* out = alloc(n, len_of(z));
    const double* pz = val_ptr(z);
    const double* ph = val_ptr(h);
    const double* pc = val_ptr(cand);
    for (std::int32_t i = 0; i < n.len; ++i)
      out[i] = (1.0 - pz[i]) * ph[i] + pz[i] * pc[i];
    return push(n, "blend");
  }

  Var concat(std::span<const Var> parts) {
    if (parts.empty()) throw std::invalid_argument("concat of nothing");
    Node n{};
    n.kind = Op::kConcat;
    n.aux = static_cast<std::int32_t>(int_pool_.size());
    n.aux2 = static_cast<std::int32_t>(parts.size());
    std::size_t total = 0;
    for (Var p : parts) {
      int_pool_.push_back(p);
      total += len_of(p);
    }
    double* out = alloc(n, total);
    for (Var p : parts) {
      const double* src = val_ptr(p);
      const std::size_t len = len_of(p);
      std::copy(src, src + len, out);
      out += len;
    }
    return push(n, "concat");
  }

  // Per-column median across equally sized rows. Even row counts take the
  // mean of the two middle order statistics. Exactly permutation invariant.
  Var median_cols(std::span<const Var> rows) {
    if (rows.empty()) throw std::invalid_argument("median of zero rows");
    const std::size_t width = len_of(rows[0]);
    for (Var r : rows)
      if (len_of(r) != width)
        throw std::invalid_argument("median rows must have equal lengths");
    Node n{};
    n.kind = Op::kMedianCols;
    n.aux = static_cast<std::int32_t>(int_pool_.size());
    n.aux2 = static_cast<std::int32_t>(rows.size());
    for (Var r : rows) int_pool_.push_back(r);
    n.aux3 = static_cast<std::int32_t>(int_pool_.size());
    int_pool_.resize(int_pool_.size() + 2 * width);
    double* out = alloc(n, width);

    const std::size_t m = rows.size();
    std::vector<std::size_t> order(m);
    std::vector<double> column(m);
    for (std::size_t col = 0; col < width; ++col) {
      for (std::size_t i = 0; i < m; ++i)
        column[i] = vals_[static_cast<std::size_t>(
            nodes_[static_cast<std::size_t>(
                       int_pool_[static_cast<std::size_t>(n.aux) + i])]
                .off) +
            col];
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) {
                         return column[x] < column[y];
                       });
      const std::size_t lo = order[(m - 1) / 2];
      const std::size_t hi = order[m / 2];
      out[col] = 0.5 * (column[lo] + column[hi]);
      int_pool_[static_cast<std::size_t>(n.aux3) + 2 * col] =
          int_pool_[static_cast<std::size_t>(n.aux) + lo];
      int_pool_[static_cast<std::size_t>(n.aux3) + 2 * col + 1] =
          int_pool_[static_cast<std::size_t>(n.aux) + hi];
    }
    return push(n, "median_cols");
  }

  static constexpr double kBceClamp = 1e-12;

  // Mean over elements of -w (y log x + (1-y) log(1-x)); x clamped to
  // [kBceClamp, 1-kBceClamp]. Empty weights mean w = 1.
  Var bce(Var x, std::span<const double> targets,
          std::span<const double> weights = {}) {
    const std::size_t len = len_of(x);
    if (targets.size() != len)
      throw std::invalid_argument("bce: " + std::to_string(targets.size()) +
                                  " targets for " + std::to_string(len) +
                                  " predictions");
    if (!weights.empty() && weights.size() != len)
      throw std::invalid_argument("bce: weight count mismatch");
    Node n{};
    n.kind = Op::kBce;
    n.a = x;
    n.aux = static_cast<std::int32_t>(dbl_pool_.size());
    dbl_pool_.insert(dbl_pool_.end(), targets.begin(), targets.end());
    if (weights.empty())
      dbl_pool_.insert(dbl_pool_.end(), len, 1.0);
    else
      dbl_pool_.insert(dbl_pool_.end(), weights.begin(), weights.end());
    double* out = alloc(n, 1);
    const double* px = val_ptr(x);
    const double* ty = dbl_pool_.data() + n.aux;
    const double* tw = ty + len;
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double xi = clamp01(px[i]);
      acc += -tw[i] * (ty[i] * std::log(xi) + (1.0 - ty[i]) * std::log1p(-xi));
    }
    out[0] = acc / static_cast<double>(len);
    return push(n, "bce");
  }

  Var sum(Var a) {
    Node n{};
    n.kind = Op::kSum;
    n.a = a;
    double* out = alloc(n, 1);
    const double* pa = val_ptr(a);
    double acc = 0.0;
    for (std::int32_t i = 0; i < n.len_a; ++i) acc += pa[i];
    out[0] = acc;
    return push(n, "sum");
  }

  // --- reverse pass ---------------------------------------------------------

  // Seeds d(loss)/d(loss) = seed_grad and accumulates parameter gradients
  // into Tensor::grad. The target must be scalar.
  void backward(Var loss, double seed_grad = 1.0) {
    if (nodes_.empty()) throw std::logic_error("backward before forward");
    const Node& top = node(loss);
    if (top.len != 1)
      throw std::logic_error("backward target must be scalar, got length " +
                             std::to_string(top.len));
    grads_.assign(vals_.size(), 0.0);
    grads_[static_cast<std::size_t>(top.off)] = seed_grad;

    for (std::size_t i = nodes_.size(); i-- > 0;) {
      const Node& n = nodes_[i];
      const double* g = grads_.data() + n.off;
      switch (n.kind) {
        case Op::kInput:
          break;
        case Op::kParam:
          for (std::int32_t k = 0; k < n.len; ++k) n.p0->grad[static_cast<std::size_t>(k)] += g[k];
          break;
        case Op::kEmbedRow: {
          double* dst = n.p0->grad.data() +
                        static_cast<std::size_t>(n.aux) * n.p0->cols();
          for (std::int32_t k = 0; k < n.len; ++k) dst[k] += g[k];
          break;
        }
        case Op::kMatVec:
          backprop_matvec(*n.p0, n.a, nullptr, -1, nullptr, g);
          break;
        case Op::kAffine:
          backprop_matvec(*n.p0, n.a, nullptr, -1, n.p2, g);
          break;
        case Op::kLin2:
          backprop_matvec(*n.p0, n.a, n.p1, n.b, n.p2, g);
          break;
        case Op::kAdd: {
          double* ga = grads_.data() + node(n.a).off;
          double* gb = grads_.data() + node(n.b).off;
          for (std::int32_t k = 0; k < n.len; ++k) {
            ga[k] += g[k];
            gb[k] += g[k];
          }
          break;
        }
        case Op::kMul: {
          double* ga = grads_.data() + node(n.a).off;
          double* gb = grads_.data() + node(n.b).off;
          const double* va = vals_.data() + node(n.a).off;
          const double* vb = vals_.data() + node(n.b).off;
          for (std::int32_t k = 0; k < n.len; ++k) {
            ga[k] += g[k] * vb[k];
            gb[k] += g[k] * va[k];
          }
          break;
        }
        case Op::kSigmoid: {
          double* ga = grads_.data() + node(n.a).off;
          const double* y = vals_.data() + n.off;
          for (std::int32_t k = 0; k < n.len; ++k)
            ga[k] += g[k] * y[k] * (1.0 - y[k]);
          break;
        }
        case Op::kTanh: {
          double* ga = grads_.data() + node(n.a).off;
          const double* y = vals_.data() + n.off;
          for (std::int32_t k = 0; k < n.len; ++k)
            ga[k] += g[k] * (1.0 - y[k] * y[k]);
          break;
        }
        case Op::kBlend: {
          double* gz = grads_.data() + node(n.a).off;
          double* gh = grads_.data() + node(n.b).off;
          double* gc = grads_.data() + node(n.c).off;
          const double* vz = vals_.data() + node(n.a).off;
          const double* vh = vals_.data() + node(n.b).off;
          const double* vc = vals_.data() + node(n.c).off;
          for (std::int32_t k = 0; k < n.len; ++k) {
            gz[k] += g[k] * (vc[k] - vh[k]);
            gh[k] += g[k] * (1.0 - vz[k]);
            gc[k] += g[k] * vz[k];
          }
          break;
        }
        case Op::kConcat: {
          std::int32_t cursor = 0;
          for (std::int32_t p = 0; p < n.aux2; ++p) {
            const Node& part = node(int_pool_[static_cast<std::size_t>(n.aux + p)]);
            double* gp = grads_.data() + part.off;
            for (std::int32_t k = 0; k < part.len; ++k) gp[k] += g[cursor + k];
            cursor += part.len;
          }
          break;
        }
        case Op::kMedianCols: {
          for (std::int32_t col = 0; col < n.len; ++col) {
            const Var lo = int_pool_[static_cast<std::size_t>(n.aux3 + 2 * col)];
            const Var hi =
                int_pool_[static_cast<std::size_t>(n.aux3 + 2 * col + 1)];
            grads_[static_cast<std::size_t>(node(lo).off + col)] +=
                0.5 * g[col];
            grads_[static_cast<std::size_t>(node(hi).off + col)] +=
                0.5 * g[col];
          }
          break;
        }
        case Op::kBce: {
          const Node& xn = node(n.a);
          double* gx = grads_.data() + xn.off;
          const double* vx = vals_.data() + xn.off;
          const double* ty = dbl_pool_.data() + n.aux;
          const double* tw = ty + xn.len;
          const double inv = 1.0 / static_cast<double>(xn.len);
          for (std::int32_t k = 0; k < xn.len; ++k) {
            const double xi = vx[k];
            if (xi <= kBceClamp || xi >= 1.0 - kBceClamp) continue;
            gx[k] += g[0] * inv * -tw[k] *
                     (ty[k] / xi - (1.0 - ty[k]) / (1.0 - xi));
          }
          break;
        }
        case Op::kSum: {
          double* ga = grads_.data() + node(n.a).off;
          for (std::int32_t k = 0; k < n.len_a; ++k) ga[k] += g[0];
          break;
        }
      }
    }
  }

 private:
  struct Node {
    Op kind;
    Var a = -1, b = -1, c = -1;
    Tensor* p0 = nullptr;
    Tensor* p1 = nullptr;
    Tensor* p2 = nullptr;
    std::int32_t aux = 0;   // embed row / pool start
    std::int32_t aux2 = 0;  // pool count
    std::int32_t aux3 = 0;  // secondary pool start (median selections)
    std::int32_t off = 0;
    std::int32_t len = 0;
    std::int32_t len_a = 0;  // parent length where needed (sum)
  };

  const Node& node(Var v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= nodes_.size())
      throw std::logic_error("invalid tape variable");
    return nodes_[static_cast<std::size_t>(v)];
  }

  std::size_t len_of(Var v) const {
    return static_cast<std::size_t>(node(v).len);
  }

  const double* val_ptr(Var v) const { return vals_.data() + node(v).off; }

  void require_same_len(Var a, Var b, const char* op) const {
    if (len_of(a) != len_of(b))
      throw std::invalid_argument(std::string(op) + ": length mismatch " +
                                  std::to_string(len_of(a)) + " vs " +
                                  std::to_string(len_of(b)));
  }

  static void check_matrix(const Tensor& w, std::size_t in_dim,
                           const char* op) {
    if (w.shape.size() != 2 || w.cols() != in_dim)
      throw std::invalid_argument(std::string(op) + ": matrix " + w.name +
                                  " does not accept input of length " +
                                  std::to_string(in_dim));
  }
  static void check_bias(const Tensor& b, std::size_t out_dim,
                         const char* op) {
    if (b.numel() != out_dim)
      throw std::invalid_argument(std::string(op) + ": bias " + b.name +
                                  " has length " + std::to_string(b.numel()) +
                                  ", expected " + std::to_string(out_dim));
  }

  static double clamp01(double x) {
    if (x < kBceClamp) return kBceClamp;
    if (x > 1.0 - kBceClamp) return 1.0 - kBceClamp;
    return x;
  }

  // Reserves the output slice. Must be called before val_ptr on parents
  // since the arena may reallocate.
  double* alloc(Node& n, std::size_t len) {
    n.off = static_cast<std::int32_t>(vals_.size());
    n.len = static_cast<std::int32_t>(len);
    if (n.a >= 0) n.len_a = node(n.a).len;
    vals_.resize(vals_.size() + len);
    return vals_.data() + n.off;
  }

  // Shared forward for kMatVec / kAffine / kLin2.
  void apply_matvec(Node& n, Tensor& w, Var x, Tensor* u, Var h,
                    Tensor* bias) {
    const std::size_t out_dim = w.rows();
    double* out = alloc(n, out_dim);
    const double* px = val_ptr(x);
    const double* ph = u ? val_ptr(h) : nullptr;
    const std::size_t in_w = w.cols();
    const std::size_t in_u = u ? u->cols() : 0;
    for (std::size_t i = 0; i < out_dim; ++i) {
      const double* wrow = w.value.data() + i * in_w;
      double acc = bias ? bias->value[i] : 0.0;
      for (std::size_t j = 0; j < in_w; ++j) acc += wrow[j] * px[j];
      if (u) {
        const double* urow = u->value.data() + i * in_u;
        for (std::size_t j = 0; j < in_u; ++j) acc += urow[j] * ph[j];
      }
      out[i] = acc;
    }
  }

  void backprop_matvec(Tensor& w, Var x, Tensor* u, Var h,
                       Tensor* bias, const double* g) {
    const std::size_t out_dim = w.rows();
    const std::size_t in_w = w.cols();
    const double* vx = vals_.data() + node(x).off;
    double* gx = grads_.data() + node(x).off;
    const double* vh = u ? vals_.data() + node(h).off : nullptr;
    double* gh = u ? grads_.data() + node(h).off : nullptr;
    const std::size_t in_u = u ? u->cols() : 0;
    for (std::size_t i = 0; i < out_dim; ++i) {
      const double gi = g[i];
      if (gi == 0.0) continue;
      double* gwrow = w.grad.data() + i * in_w;
      const double* wrow = w.value.data() + i * in_w;
      for (std::size_t j = 0; j < in_w; ++j) {
        gwrow[j] += gi * vx[j];
        gx[j] += gi * wrow[j];
      }
      if (u) {
        double* gurow = u->grad.data() + i * in_u;
        const double* urow = u->value.data() + i * in_u;
        for (std::size_t j = 0; j < in_u; ++j) {
          gurow[j] += gi * vh[j];
          gh[j] += gi * urow[j];
        }
      }
      if (bias) bias->grad[i] += gi;
    }
  }

  Var push(Node& n, const char* what) {
    const double* out = vals_.data() + n.off;
    for (std::int32_t i = 0; i < n.len; ++i)
      if (!std::isfinite(out[i]))
        throw NumericError(std::string("non-finite value produced by ") +
                           what);
    nodes_.push_back(n);
    return static_cast<Var>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<double> vals_;
  std::vector<double> grads_;
  std::vector<Var> int_pool_;
  std::vector<double> dbl_pool_;
};

}  // namespace ad
}  // namespace msc
