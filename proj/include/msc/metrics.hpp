// Micro-averaged evaluation: all (document, class) decisions are pooled
// before precision/recall/F1 are computed. Empty denominators score zero.
#pragma once

#include <span>
#include <vector>

#include "msc/autodiff.hpp"
#include "msc/synth.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

struct MicroMetrics {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline MicroMetrics finish_counts(std::size_t tp, std::size_t fp,
                                  std::size_t fn) {
  MicroMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

inline MicroMetrics micro_metrics(std::span<const Vec> scores,
                                  std::span<const LabelVector> targets,
                                  double threshold = 0.5) {
  if (scores.size() != targets.size())
    throw std::invalid_argument("micro_metrics: document count mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t d = 0; d < scores.size(); ++d) {
    if (scores[d].size() != targets[d].size())
      throw std::invalid_argument("micro_metrics: class count mismatch");
    for (std::size_t c = 0; c < scores[d].size(); ++c) {
      const bool pred = scores[d][c] >= threshold;
      const bool truth = targets[d][c] != 0;
      if (pred && truth) ++tp;
      else if (pred) ++fp;
      else if (truth) ++fn;
    }
  }
  return finish_counts(tp, fp, fn);
}

// Token-level tagging quality against known segment spans. A token counts
// as a true positive when its predicted tag equals the category of the
// span containing it.
inline MicroMetrics token_tag_metrics(
    std::span<const std::vector<int>> tags,
    std::span<const std::vector<GtSpan>> truth) {
  if (tags.size() != truth.size())
    throw std::invalid_argument("token_tag_metrics: document count mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t d = 0; d < tags.size(); ++d) {
    std::vector<int> gold(tags[d].size(), -1);
    for (const GtSpan& s : truth[d]) {
      if (s.end > gold.size())
        throw std::invalid_argument("token_tag_metrics: span beyond document");
      for (std::size_t t = s.start; t < s.end; ++t) gold[t] = s.category;
    }
    for (std::size_t t = 0; t < gold.size(); ++t) {
      const bool pred = tags[d][t] >= 0;
      const bool truth_here = gold[t] >= 0;
      if (pred && truth_here) {
        if (tags[d][t] == gold[t]) {
          ++tp;
        } else {  // wrong class: misses the gold class and mis-fires another
          ++fp;
          ++fn;
        }
      } else if (pred) {
        ++fp;
      } else if (truth_here) {
        ++fn;
      }
    }
  }
  return finish_counts(tp, fp, fn);
}

}  // namespace msc
