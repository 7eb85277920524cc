// Mini-batch training loop. Batches are sampled with replacement from the
// (typically replication-balanced) training set; every document builds its
// own tape, so no padding is involved; gradients are averaged by seeding
// each backward pass with 1/batch_size. Validation runs after every epoch
// and the parameters with the best validation F1 are kept.
#pragma once

#include <chrono>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "msc/metrics.hpp"
#include "msc/model.hpp"
#include "msc/optimizer.hpp"

namespace msc {

struct TrainConfig {
  std::size_t batch_size = 256;
  std::size_t batches_per_epoch = 300;
  std::size_t epochs = 1000;
  double lr = 0.001;
  std::uint64_t seed = 1;
};

struct EpochRow {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_precision = 0.0;
  double val_recall = 0.0;
  double val_f1 = 0.0;
};

struct TrainReport {
  std::vector<EpochRow> rows;
  std::size_t best_epoch = 0;
  double best_f1 = 0.0;
  double wall_seconds = 0.0;  // measured, deliberately not serialized
};

// The report file carries no timing so that equal seeds give equal bytes.
inline void write_train_report(std::ostream& out, const TrainReport& report) {
  csv_write_row(out, {"epoch", "train_loss", "val_precision", "val_recall",
                      "val_f1"});
  for (const EpochRow& r : report.rows)
    csv_write_row(out, {std::to_string(r.epoch), format_double(r.train_loss),
                        format_double(r.val_precision),
                        format_double(r.val_recall), format_double(r.val_f1)});
}

inline std::vector<Vec> score_documents(const MscModel& model,
                                        std::span<const Document> docs) {
  std::vector<Vec> scores;
  scores.reserve(docs.size());
  for (const Document& d : docs) {
    if (d.tokens.empty())
      throw DataError("cannot score empty document " + d.note_id);
    scores.push_back(forward_values(model, d.tokens).doc_scores);
  }
  return scores;
}

inline MicroMetrics evaluate_documents(const MscModel& model,
                                       std::span<const Document> docs,
                                       double threshold = 0.5) {
  const std::vector<Vec> scores = score_documents(model, docs);
  std::vector<LabelVector> targets;
  targets.reserve(docs.size());
  for (const Document& d : docs) targets.push_back(d.labels);
  return micro_metrics(scores, targets, threshold);
}

inline TrainReport train(MscModel& model, std::span<const Document> train_docs,
                         std::span<const Document> val_docs,
                         const TrainConfig& cfg,
                         std::ostream* progress = nullptr) {
  if (cfg.batch_size == 0 || cfg.batches_per_epoch == 0 || cfg.epochs == 0)
    throw std::invalid_argument("training needs positive batch/epoch sizes");

  std::vector<const Document*> pool;
  for (const Document& d : train_docs)
    if (!d.tokens.empty()) pool.push_back(&d);
  if (pool.empty()) throw DataError("no non-empty training documents");
  std::vector<const Document*> val;
  for (const Document& d : val_docs)
    if (!d.tokens.empty()) val.push_back(&d);
  if (progress && (pool.size() != train_docs.size() ||
                   val.size() != val_docs.size()))
    *progress << "dropped "
              << (train_docs.size() - pool.size()) +
                     (val_docs.size() - val.size())
              << " empty documents\n";

  Rng rng(cfg.seed);
  AmsGrad opt(model.tensors(), {.lr = cfg.lr});
  ad::Tape tape;
  TrainReport report;
  std::vector<Vec> best_state;
  const auto started = std::chrono::steady_clock::now();

  std::vector<LabelVector> val_targets;
  for (const Document* d : val) val_targets.push_back(d->labels);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t batch = 1; batch <= cfg.batches_per_epoch; ++batch) {
      opt.zero_grad();
      const Document* current = nullptr;
      try {
        for (std::size_t i = 0; i < cfg.batch_size; ++i) {
          current = pool[rng.below(pool.size())];
          tape.reset();
          const ad::Var loss = build_loss(model, tape, current->tokens,
                                          current->labels);
          tape.backward(loss, 1.0 / static_cast<double>(cfg.batch_size));
          loss_sum += tape.scalar(loss);
          ++loss_count;
        }
        opt.step();
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batch) +
                           (current ? ", note " + current->note_id : "") +
                           ")");
      }
    }

    EpochRow row;
    row.epoch = epoch;
    row.train_loss = loss_sum / static_cast<double>(loss_count);
    if (!val.empty()) {
      std::vector<Vec> scores;
      scores.reserve(val.size());
      for (const Document* d : val)
        scores.push_back(forward_values(model, d->tokens).doc_scores);
      const MicroMetrics m = micro_metrics(scores, val_targets);
      row.val_precision = m.precision;
      row.val_recall = m.recall;
      row.val_f1 = m.f1;
      if (report.rows.empty() || m.f1 > report.best_f1) {
        report.best_f1 = m.f1;
        report.best_epoch = epoch;
        best_state.clear();
        for (Tensor* t : model.tensors()) best_state.push_back(t->value);
      }
    }
    report.rows.push_back(row);
    if (progress) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        started)
              .count();
      *progress << "epoch " << epoch << ": loss "
                << format_double(row.train_loss) << ", val F1 "
                << format_double(row.val_f1) << " (" << format_double(elapsed)
                << "s)\n";
    }
  }

  if (!best_state.empty()) {
    auto tensors = model.tensors();
    for (std::size_t i = 0; i < tensors.size(); ++i)
      tensors[i]->value = best_state[i];
  }
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return report;
}

}  // namespace msc
