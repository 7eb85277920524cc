// Label balancing by replication. The document/label incidence matrix A is
// normalised by the total label count S; the target is a uniform per-class
// share c, swept over c = k·max(l) for k = 1..10 where l = (A/S)·1. Each
// candidate solves
//   min ‖(A/S)x - c·1‖²  s.t.  x ≥ 0
// with projected gradient + Barzilai-Borwein steps under a monotone
// backtracking safeguard, rounds x to whole replication counts (at least
// one copy of every note), and scores the replicated label counts against
// a uniform reference; the best-scoring candidate wins, earliest on ties.
#pragma once

#include <cmath>
#include <iostream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "msc/corpus.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

using Vec = std::vector<double>;

struct Mat {
  std::size_t rows = 0, cols = 0;
  Vec data;  // row-major

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Binary class-by-document incidence matrix.
inline Mat contingency(std::span<const Document> docs) {
  if (docs.empty()) throw DataError("cannot balance an empty corpus");
  Mat a(kNumCategories, docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const LabelVector& y = docs[d].labels;
    if (y.size() != kNumCategories)
      throw DataError("document " + docs[d].note_id +
                      " has a malformed label vector");
    for (std::size_t c = 0; c < kNumCategories; ++c)
      if (y[c]) a.at(c, d) = 1.0;
  }
  return a;
}

inline Vec row_sums(const Mat& a) {
  Vec out(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c) out[r] += a.at(r, c);
  return out;
}

// --- non-negative least squares ----------------------------------------------

struct NnlsOptions {
  std::size_t max_iterations = 100000;
  double tolerance = 1e-8;   // objective-change stop
  double kkt_tolerance = 1e-6;
};

struct NnlsResult {
  Vec x;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool kkt_ok = false;
  Vec trace;  // objective after each accepted iterate
};

namespace detail {

inline Vec matvec(const Mat& a, const Vec& x) {
  Vec out(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + r * a.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

inline Vec matvec_t(const Mat& a, const Vec& y) {
  Vec out(a.cols, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + r * a.cols;
    for (std::size_t c = 0; c < a.cols; ++c) out[c] += row[c] * y[r];
  }
  return out;
}

inline double objective_of(const Mat& a, const Vec& x, const Vec& r) {
  const Vec ax = matvec(a, x);
  double f = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = ax[i] - r[i];
    f += d * d;
  }
  return f;
}

// ‖AᵀA‖∞ for a nonnegative A: max over columns j of aⱼᵀ(A·1).
inline double gram_inf_norm(const Mat& a) {
  Vec ones(a.cols, 1.0);
  const Vec u = matvec(a, ones);
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols; ++j) {
    double dot = 0.0;
    for (std::size_t r = 0; r < a.rows; ++r) dot += a.at(r, j) * u[r];
    best = std::max(best, dot);
  }
  return best;
}

}  // namespace detail

// Projected gradient with Barzilai-Borwein step selection. The objective is
// guaranteed non-increasing: a candidate step that raises it is halved
// until it does not.
inline NnlsResult solve_nnls(const Mat& a, const Vec& r,
                             const NnlsOptions& opts = {}) {
  if (r.size() != a.rows)
    throw std::invalid_argument("solve_nnls: target length mismatch");
  NnlsResult res;
  // Start at the all-ones point (no replication). Monotone descent from
  // there keeps the solution at least as good as leaving the corpus alone.
  res.x.assign(a.cols, 1.0);

  const double lipschitz = 2.0 * detail::gram_inf_norm(a);
  double alpha = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  Vec grad(a.cols), prev_x, prev_grad;
  double f = detail::objective_of(a, res.x, r);
  res.trace.push_back(f);
  auto gradient = [&](const Vec& x, Vec& g) {
    Vec ax = detail::matvec(a, x);
    for (std::size_t i = 0; i < a.rows; ++i) ax[i] -= r[i];
    g = detail::matvec_t(a, ax);
    for (double& v : g) v *= 2.0;
  };
  gradient(res.x, grad);

  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    if (it > 0) {
      // BB1 step from the last move; fall back to the previous step when
      // the curvature estimate is unusable.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < res.x.size(); ++i) {
        const double s = res.x[i] - prev_x[i];
        const double y = grad[i] - prev_grad[i];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 1e-300) alpha = std::min(std::max(ss / sy, 1e-10), 1e10);
    }

    prev_x = res.x;
    prev_grad = grad;

    double step = alpha;
    Vec trial(res.x.size());
    double f_trial = 0.0;
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < trial.size(); ++i)
        trial[i] = std::max(0.0, prev_x[i] - step * prev_grad[i]);
      f_trial = detail::objective_of(a, trial, r);
      if (f_trial <= f) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!moved) {  // no descent at any step length: stationary
      res.converged = true;
      break;
    }
    res.x = std::move(trial);
    const double drop = f - f_trial;
    f = f_trial;
    res.trace.push_back(f);
    gradient(res.x, grad);
    if (drop <= opts.tolerance * std::max(1.0, f)) {
      res.converged = true;
      break;
    }
  }
  res.objective = f;

  // KKT conditions: near-zero gradient on active coordinates, no descent
  // direction into the feasible set on the boundary.
  const double scale = std::max(1.0, 0.5 * lipschitz);
  res.kkt_ok = true;
  for (std::size_t i = 0; i < res.x.size(); ++i) {
    if (res.x[i] > 0.0) {
      if (std::abs(grad[i]) > opts.kkt_tolerance * scale) res.kkt_ok = false;
    } else if (grad[i] < -opts.kkt_tolerance * scale) {
      res.kkt_ok = false;
    }
  }
  return res;
}

// --- candidate sweep -----------------------------------------------------------

struct BalancePlan {
  std::vector<std::size_t> counts;  // copies per document
  std::size_t chosen_k = 0;
  double chosen_c = 0.0;
  double score = 0.0;
  Vec before, after;  // per-class label counts
  NnlsResult solve;   // solve at the winning candidate
};

namespace detail {

// Distance of the replicated label counts from a uniform reference whose
// endpoints are the first and last class counts. Callers pass only the
// classes that occur in the corpus: replication cannot move an absent
// class, and a structurally zero endpoint would corrupt the reference.
inline double uniform_score(const Vec& after) {
  const double a = after.front();
  const double b = after.back();
  const double ref_mean = std::max((a + b) / 2.0, 1e-12);
  const double ref_var = (a - b) * (a - b) / 12.0;
  double mean = 0.0;
  for (double v : after) mean += v;
  mean /= static_cast<double>(after.size());
  double var = 0.0;
  for (double v : after) var += (v - mean) * (v - mean);
  var /= static_cast<double>(after.size());
  return std::abs(mean - ref_mean) / ref_mean +
         std::abs(var - ref_var) / std::max(ref_var, 1e-12);
}

}  // namespace detail

inline BalancePlan balance(std::span<const Document> docs,
                           const NnlsOptions& opts = {}) {
  const Mat raw = contingency(docs);
  const Vec before = row_sums(raw);
  double total = 0.0;
  for (double v : before) total += v;
  if (total == 0.0)
    throw DataError("cannot balance: no document carries any label");

  Mat ahat(raw.rows, raw.cols);
  for (std::size_t i = 0; i < raw.data.size(); ++i)
    ahat.data[i] = raw.data[i] / total;

  const Vec shares = row_sums(ahat);
  double max_rep = 0.0;
  for (double v : shares) max_rep = std::max(max_rep, v);

  std::vector<std::size_t> present;
  for (std::size_t cls = 0; cls < kNumCategories; ++cls)
    if (before[cls] > 0.0) present.push_back(cls);

  BalancePlan best;
  bool have_best = false;
  for (std::size_t k = 1; k <= 10; ++k) {
    const double c = static_cast<double>(k) * max_rep;
    const Vec target(kNumCategories, c);
    NnlsResult solve = solve_nnls(ahat, target, opts);
    if (!solve.converged)
      throw NumericError("balancer did not converge at candidate " +
                         std::to_string(k) + " (objective " +
                         format_double(solve.objective) + " after " +
                         std::to_string(solve.iterations) + " iterations)");

    std::vector<std::size_t> counts(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d)
      counts[d] = static_cast<std::size_t>(
          std::max(1.0, std::floor(solve.x[d] + 0.5)));

    Vec after(kNumCategories, 0.0);
    for (std::size_t cls = 0; cls < kNumCategories; ++cls)
      for (std::size_t d = 0; d < docs.size(); ++d)
        after[cls] += raw.at(cls, d) * static_cast<double>(counts[d]);

    Vec present_after(present.size());
    for (std::size_t i = 0; i < present.size(); ++i)
      present_after[i] = after[present[i]];
    const double score = detail::uniform_score(present_after);
    if (!have_best || score < best.score) {
      have_best = true;
      best.counts = std::move(counts);
      best.chosen_k = k;
      best.chosen_c = c;
      best.score = score;
      best.after = std::move(after);
      best.solve = std::move(solve);
    }
  }
  best.before = before;
  return best;
}

inline std::vector<Document> replicate_documents(
    std::span<const Document> docs, std::span<const std::size_t> counts) {
  if (docs.size() != counts.size())
    throw std::invalid_argument("replication counts do not match documents");
  std::vector<Document> out;
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  out.reserve(total);
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (std::size_t i = 0; i < counts[d]; ++i) out.push_back(docs[d]);
  return out;
}

// --- reports -----------------------------------------------------------------

inline void write_replication_manifest(std::ostream& out,
                                       std::span<const Document> docs,
                                       std::span<const std::size_t> counts) {
  if (docs.size() != counts.size())
    throw std::invalid_argument("replication counts do not match documents");
  csv_write_row(out, {"note_id", "count"});
  for (std::size_t d = 0; d < docs.size(); ++d)
    csv_write_row(out, {docs[d].note_id, std::to_string(counts[d])});
}

inline std::map<std::string, std::size_t> read_replication_manifest(
    std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row) ||
      row != std::vector<std::string>{"note_id", "count"})
    throw ParseError("replication manifest header must be note_id,count",
                     reader.line());
  std::map<std::string, std::size_t> out;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 2)
      throw ParseError("replication manifest row needs 2 fields",
                       reader.line());
    const long long n = parse_long(row[1], reader.line());
    if (n < 0) throw ParseError("negative replication count", reader.line());
    if (!out.emplace(row[0], static_cast<std::size_t>(n)).second)
      throw ParseError("duplicate note_id in replication manifest: " + row[0],
                       reader.line());
  }
  return out;
}

inline void write_frequency_report(std::ostream& out, const Vec& before,
                                   const Vec& after) {
  if (before.size() != kNumCategories || after.size() != kNumCategories)
    throw std::invalid_argument("frequency report needs one count per class");
  csv_write_row(out, {"category", "before", "after"});
  const auto& cats = category_table();
  for (std::size_t c = 0; c < kNumCategories; ++c)
    csv_write_row(out, {std::string(cats[c].title),
                        std::to_string(static_cast<long long>(before[c])),
                        std::to_string(static_cast<long long>(after[c]))});
}

}  // namespace msc
