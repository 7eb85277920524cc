// Acceptance suite. Each numbered criterion prints exactly one PASS/FAIL
// line with its measured values; the process exit code is the number of
// failures. Tolerances and budgets are pinned here as named constants.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msc/msc.hpp"
#include "oracles.hpp"

#ifndef MSC_CLI_PATH
#error "MSC_CLI_PATH must point at the built executable"
#endif

using namespace msc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// --- pinned tolerances and budgets -------------------------------------------

constexpr double kGradRelTol = 1e-4;        // criterion 1
constexpr double kGradTimeBudget = 30.0;    // seconds
constexpr double kShapeTimeBudget = 5.0;    // criterion 2
constexpr std::size_t kMedianPermutations = 100;  // criterion 3
constexpr double kBalanceStdRatio = 0.25;   // criterion 4
constexpr double kNnlsObjectiveTol = 1e-6;
constexpr std::size_t kNnlsOracleIters = 1000000;
constexpr double kBalanceTimeBudget = 60.0;
constexpr std::size_t kTaggerFixtures = 1000;  // criterion 5
constexpr double kTaggerTimeBudget = 30.0;
constexpr double kDocF1Floor = 0.85;        // criterion 6
constexpr double kTokenPrecisionFloor = 0.60;
constexpr double kTokenRecallFloor = 0.60;
constexpr double kLearnTimeBudget = 900.0;  // 15 minutes
constexpr double kLexiconPoolShare = 0.70;  // criterion 7
constexpr std::size_t kLexiconTop = 20;
constexpr std::size_t kOptWindow = 50;      // criterion 8
constexpr std::size_t kOptSteps = 2000;
constexpr double kOptLr = 0.002;  // slow enough to stay above roundoff
constexpr std::size_t kVhatSteps = 10000;

int failures = 0;

void report(int n, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << ": "
            << detail << "\n";
  if (!pass) ++failures;
}

double secs(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

std::string fmt(double v) { return format_double(v); }

Vocabulary sized_vocabulary(std::size_t words) {
  std::vector<std::string> list;
  for (std::size_t i = 0; i < words; ++i)
    list.push_back("w" + std::string(3 - std::min<std::size_t>(
                             3, std::to_string(i).size()), '0') +
                   std::to_string(i));
  return build_vocabulary({list});
}

// --- criterion 1: gradient correctness ----------------------------------------

void criterion_1() {
  const auto t0 = Clock::now();
  ModelConfig cfg;
  cfg.embed_dim = 8;
  cfg.word_hidden = 4;
  cfg.phrase_hidden = 3;
  Rng rng(2024);
  MscModel model = make_model(sized_vocabulary(50), cfg, rng);

  std::vector<std::uint32_t> tokens(12);
  for (auto& t : tokens)
    t = static_cast<std::uint32_t>(rng.below(model.vocab.size()));
  LabelVector labels(kNumCategories, 0);
  for (std::size_t c = 0; c < kNumCategories; ++c)
    labels[c] = static_cast<std::uint8_t>(rng.below(2));

  for (Tensor* t : model.tensors()) t->zero_grad();
  ad::Tape tape;
  const ad::Var loss = build_loss(model, tape, tokens, labels);
  tape.backward(loss);

  const Vec targets(labels.begin(), labels.end());
  const auto loss_value = [&] {
    return bce_value(forward_values(model, tokens).doc_scores, targets);
  };
  const GradCheckReport rep =
      check_gradients(model.tensors(), loss_value);
  const double elapsed = secs(t0, Clock::now());
  const bool pass =
      rep.max_rel_err <= kGradRelTol && elapsed < kGradTimeBudget;
  report(1, pass,
         "composed-model gradient check, " +
             std::to_string(rep.coords_checked) + " coordinates, max rel err " +
             fmt(rep.max_rel_err) + " (tol " + fmt(kGradRelTol) + ", worst " +
             rep.worst_tensor + "[" + std::to_string(rep.worst_index) +
             "]), " + fmt(elapsed) + "s of " + fmt(kGradTimeBudget) + "s");
}

// --- criterion 2: shape chain ---------------------------------------------------

void criterion_2() {
  const auto t0 = Clock::now();
  ModelConfig cfg;
  cfg.embed_dim = 8;
  cfg.word_hidden = 4;
  cfg.phrase_hidden = 3;
  Rng rng(2025);
  MscModel model = make_model(sized_vocabulary(50), cfg, rng);

  std::string bad;
  for (std::size_t n = 5; n <= 40 && bad.empty(); ++n) {
    std::vector<std::uint32_t> tokens(n);
    for (auto& t : tokens)
      t = static_cast<std::uint32_t>(rng.below(model.vocab.size()));
    const ModelOutputs out = forward_values(model, tokens);
    if (out.word_probs.size() != n) bad = "word rows at n=" + std::to_string(n);
    for (const Vec& row : out.word_probs)
      if (row.size() != kNumCategories) bad = "word cols at n=" + std::to_string(n);
    if (out.phrase_probs.size() != n - 4)
      bad = "phrase rows at n=" + std::to_string(n);
    for (const Vec& row : out.phrase_probs)
      if (row.size() != kNumCategories)
        bad = "phrase cols at n=" + std::to_string(n);
    if (out.doc_scores.size() != kNumCategories)
      bad = "doc scores at n=" + std::to_string(n);
  }
  for (std::size_t n = 1; n <= 4 && bad.empty(); ++n) {
    const std::vector<std::uint32_t> tokens(n, 1);
    if (forward_values(model, tokens).phrase_probs.size() != 1)
      bad = "short-document phrase rows at n=" + std::to_string(n);
  }
  const double elapsed = secs(t0, Clock::now());
  const bool pass = bad.empty() && elapsed < kShapeTimeBudget;
  report(2, pass,
         "shape chain n=5..40 plus short documents n=1..4" +
             (bad.empty() ? std::string(", all as specified")
                          : ", first failure: " + bad) +
             ", " + fmt(elapsed) + "s of " + fmt(kShapeTimeBudget) + "s");
}

// --- criterion 3: median head ----------------------------------------------------

void criterion_3() {
  Rng rng(2026);
  std::size_t checked = 0;
  std::string bad;
  for (int fixture = 0; fixture < 10 && bad.empty(); ++fixture) {
    const std::size_t rows = static_cast<std::size_t>(rng.range(1, 12));
    std::vector<Vec> base(rows, Vec(kNumCategories));
    for (Vec& row : base)
      for (double& v : row) v = rng.uniform(0.0, 1.0);

    const Vec scores = median_scores(base);
    for (std::size_t c = 0; c < kNumCategories && bad.empty(); ++c) {
      Vec col(rows);
      for (std::size_t s = 0; s < rows; ++s) col[s] = base[s][c];
      if (scores[c] != oracle::median(col))
        bad = "sort-oracle mismatch at class " + std::to_string(c);
    }

    std::vector<Vec> shuffled = base;
    for (std::size_t p = 0; p < kMedianPermutations && bad.empty(); ++p) {
      rng.shuffle(shuffled);
      if (median_scores(shuffled) != scores) {
        bad = "permutation " + std::to_string(p) + " changed the scores";
      }
      ++checked;
    }
  }
  report(3, bad.empty(),
         "median head: 10 fixtures x " + std::to_string(kMedianPermutations) +
             " row permutations bitwise-invariant (" + std::to_string(checked) +
             " checks) and equal to the sort-based oracle" +
             (bad.empty() ? "" : "; " + bad));
}

// --- criterion 4: balancer -------------------------------------------------------

void criterion_4() {
  const auto t0 = Clock::now();
  // 100 single-label documents at class frequencies 0.7 / 0.2 / 0.1.
  std::vector<Document> docs;
  const std::size_t counts[] = {70, 20, 10};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < counts[c]; ++i) {
      Document d;
      d.note_id = "c" + std::to_string(c) + "-" + std::to_string(i);
      d.tokens = {1};
      d.labels.assign(kNumCategories, 0);
      d.labels[c] = 1;
      docs.push_back(std::move(d));
    }

  const BalancePlan plan = balance(docs);
  const std::vector<Document> replicated =
      replicate_documents(docs, plan.counts);
  const Vec after_all = row_sums(contingency(replicated));

  auto present_std = [](const Vec& counts) {
    Vec present;
    for (std::size_t c = 0; c < 3; ++c) present.push_back(counts[c]);
    double mean = 0.0;
    for (double v : present) mean += v;
    mean /= 3.0;
    double var = 0.0;
    for (double v : present) var += (v - mean) * (v - mean);
    return std::sqrt(var / 3.0);
  };
  const double std_before = present_std(plan.before);
  const double std_after = present_std(after_all);

  // Re-solve the winning candidate's system with the long fixed-step oracle.
  const Mat raw = contingency(docs);
  double total = 0.0;
  for (double v : row_sums(raw)) total += v;
  Mat ahat(raw.rows, raw.cols);
  for (std::size_t i = 0; i < raw.data.size(); ++i)
    ahat.data[i] = raw.data[i] / total;
  const Vec target(kNumCategories, plan.chosen_c);
  const double oracle_obj = oracle::nnls_pg(ahat, target, kNnlsOracleIters);
  const double gap = std::abs(plan.solve.objective - oracle_obj);

  const double elapsed = secs(t0, Clock::now());
  const bool pass = std_after <= kBalanceStdRatio * std_before &&
                    gap <= kNnlsObjectiveTol && elapsed < kBalanceTimeBudget;
  report(4, pass,
         "70/20/10 balance: freq std " + fmt(std_before) + " -> " +
             fmt(std_after) + " (ratio " + fmt(std_after / std_before) +
             ", bound " + fmt(kBalanceStdRatio) + "); NNLS objective " +
             fmt(plan.solve.objective) + " vs 1e6-iteration oracle " +
             fmt(oracle_obj) + " (|gap| " + fmt(gap) + ", tol " +
             fmt(kNnlsObjectiveTol) + "); " + fmt(elapsed) + "s of " +
             fmt(kBalanceTimeBudget) + "s");
}

// --- criterion 5: segment tagger --------------------------------------------------

void criterion_5() {
  const auto t0 = Clock::now();
  Rng rng(2027);
  const std::size_t window = 5;  // the source configuration
  std::size_t mismatches = 0, roundtrip_failures = 0, nonzero_subthreshold = 0;
  for (std::size_t fixture = 0; fixture < kTaggerFixtures; ++fixture) {
    const std::size_t n = static_cast<std::size_t>(rng.range(1, 30));
    std::vector<Vec> probs(phrase_row_count(n, window), Vec(kNumCategories));
    const bool sub_threshold = fixture % 10 == 9;  // every tenth fixture
    for (Vec& row : probs)
      for (double& v : row)
        v = rng.uniform(0.0, sub_threshold ? 0.499 : 1.0);

    const WordTagSequence tags = tag_words(probs, n, window, {});
    const std::vector<int> want =
        oracle::tag_words(probs, n, window, 0.5, false, false);
    if (tags != std::vector<int>(want)) ++mismatches;

    const std::vector<Segment> segs = segment(tags);
    if (sub_threshold && !segs.empty()) ++nonzero_subthreshold;
    WordTagSequence rebuilt(n, kNoTag);
    for (const Segment& s : segs)
      for (std::size_t t = s.start; t <= s.last; ++t)
        rebuilt[t] = s.category;
    if (rebuilt != tags) ++roundtrip_failures;
  }
  const double elapsed = secs(t0, Clock::now());
  const bool pass = mismatches == 0 && roundtrip_failures == 0 &&
                    nonzero_subthreshold == 0 && elapsed < kTaggerTimeBudget;
  report(5, pass,
         std::to_string(kTaggerFixtures) +
             " random phrase fixtures (n<=30): " +
             std::to_string(mismatches) + " oracle mismatches, " +
             std::to_string(nonzero_subthreshold) +
             " sub-threshold fixtures with segments, " +
             std::to_string(roundtrip_failures) +
             " segmentation round-trip failures; " + fmt(elapsed) + "s of " +
             fmt(kTaggerTimeBudget) + "s");
}

// --- criteria 6 and 7: end-to-end learning and lexicon quality --------------------

struct LearnArtifacts {
  bool trained = false;
  MscModel model;
  std::vector<Document> train_docs, val_docs, test_docs;
  SynthCorpus corpus;
  CategoryVocabulary pools;
  std::size_t active_categories = 0;
};

LearnArtifacts criterion_6() {
  const auto t0 = Clock::now();
  LearnArtifacts art;

  GeneratorConfig gen;
  gen.docs = 2000;
  gen.seed = 2026;
  gen.categories = 4;
  // Single-label notes: the planted segment covers >= 60% of the tokens, so
  // a majority of phrase rows see the label's keywords and the per-class
  // median can clear the 0.5 threshold. Splitting coverage across two
  // labels would leave every label below half coverage, which the median
  // head cannot express cleanly.
  gen.labels_min = 1;
  gen.labels_max = 1;
  gen.length_min = 30;
  gen.length_max = 80;
  art.corpus = synthesize_corpus(gen);
  art.active_categories = gen.categories;

  const StopwordSet stop = default_stopwords();
  const Taxonomy tax = default_taxonomy();

  // Split on note ids; the vocabulary comes from the training subset only.
  std::vector<Document> stubs;
  for (const RawNote& n : art.corpus.notes)
    stubs.push_back(Document{n.note_id, {}, LabelVector(kNumCategories, 0)});
  const CorpusSplit split_ids = split(stubs, SplitRatios{0.6, 0.2, 0.2}, 7);
  std::set<std::string> train_ids, val_ids;
  for (const auto& d : split_ids.train) train_ids.insert(d.note_id);
  for (const auto& d : split_ids.validation) val_ids.insert(d.note_id);

  std::vector<std::vector<std::string>> train_tokens;
  for (const RawNote& n : art.corpus.notes)
    if (train_ids.count(n.note_id))
      train_tokens.push_back(preprocess(n.body, stop));
  Vocabulary vocab = build_vocabulary(train_tokens);

  for (const RawNote& n : art.corpus.notes) {
    Document d = make_document(n, vocab, stop, tax, UnknownCodePolicy::kStrict);
    if (train_ids.count(n.note_id)) art.train_docs.push_back(std::move(d));
    else if (val_ids.count(n.note_id)) art.val_docs.push_back(std::move(d));
    else art.test_docs.push_back(std::move(d));
  }

  const BalancePlan plan = balance(art.train_docs);
  const std::vector<Document> balanced =
      replicate_documents(art.train_docs, plan.counts);

  ModelConfig mcfg;
  mcfg.embed_dim = 32;
  mcfg.word_hidden = 20;
  mcfg.phrase_hidden = 10;
  Rng init(99);
  art.model = make_model(vocab, mcfg, init);

  TrainConfig tcfg;
  tcfg.batch_size = 32;
  tcfg.batches_per_epoch = 50;
  tcfg.epochs = 100;  // the pinned ceiling
  tcfg.lr = 0.001;
  tcfg.seed = 11;
  const TrainReport rep = train(art.model, balanced, art.val_docs, tcfg);
  art.trained = true;

  const MicroMetrics doc_m = evaluate_documents(art.model, art.test_docs);

  std::ostringstream truth_buf;
  write_ground_truth(truth_buf, art.corpus.notes, art.corpus.spans);
  std::istringstream truth_in(truth_buf.str());
  const auto truth = read_ground_truth(truth_in);
  std::vector<WordTagSequence> all_tags;
  std::vector<std::vector<GtSpan>> spans;
  for (const Document& d : art.test_docs) {
    const ModelOutputs fwd = forward_values(art.model, d.tokens);
    all_tags.push_back(
        tag_words(fwd.phrase_probs, d.tokens.size(), art.model.cfg.window, {}));
    const auto it = truth.find(d.note_id);
    spans.push_back(it == truth.end() ? std::vector<GtSpan>{} : it->second);
  }
  const MicroMetrics tok_m = token_tag_metrics(all_tags, spans);

  const double elapsed = secs(t0, Clock::now());
  const bool pass = doc_m.f1 >= kDocF1Floor &&
                    tok_m.precision >= kTokenPrecisionFloor &&
                    tok_m.recall >= kTokenRecallFloor &&
                    elapsed < kLearnTimeBudget;
  report(6, pass,
         "2000 notes / 4 categories / 30-80 tokens, d=32 wh=20 ph=10 batch 32 "
         "lr 0.001, " +
             std::to_string(tcfg.epochs) + " epochs (best val F1 " +
             fmt(rep.best_f1) + " at " + std::to_string(rep.best_epoch) +
             "): test doc micro-F1 " + fmt(doc_m.f1) + " (floor " +
             fmt(kDocF1Floor) + "), token precision " + fmt(tok_m.precision) +
             " recall " + fmt(tok_m.recall) + " (floors " +
             fmt(kTokenPrecisionFloor) + "/" + fmt(kTokenRecallFloor) + "); " +
             fmt(elapsed) + "s of " + fmt(kLearnTimeBudget) + "s");
  return art;
}

void criterion_7(LearnArtifacts& art) {
  if (!art.trained) {
    report(7, false, "skipped: criterion 6 produced no trained model");
    return;
  }
  std::ostringstream pools_buf;
  write_pools(pools_buf, art.corpus);
  std::istringstream pools_in(pools_buf.str());
  art.pools = read_pools_as_reference(pools_in);

  TagLexicon lex;
  for (const std::vector<Document>* part :
       {&art.train_docs, &art.val_docs, &art.test_docs})
    for (const Document& d : *part) {
      const ModelOutputs fwd = forward_values(art.model, d.tokens);
      add_to_lexicon(lex, d,
                     tag_words(fwd.phrase_probs, d.tokens.size(),
                               art.model.cfg.window, {}),
                     art.model.vocab);
    }

  bool share_ok = true;
  std::string shares;
  for (std::size_t c = 0; c < art.active_categories; ++c) {
    const auto top = top_words(lex, c, kLexiconTop);
    std::size_t hits = 0;
    for (const auto& [word, count] : top)
      hits += art.pools.words[c].count(word) > 0;
    const double share =
        top.empty() ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(top.size());
    if (top.size() < kLexiconTop || share < kLexiconPoolShare) share_ok = false;
    if (!shares.empty()) shares += " ";
    shares += "cat" + std::to_string(c) + " " + std::to_string(hits) + "/" +
              std::to_string(top.size());
  }

  const auto got = score_lexicon(lex, art.pools);
  const auto want = oracle::intersections(lex, art.pools);
  bool oracle_ok = true;
  for (std::size_t c = 0; c < kNumCategories; ++c)
    oracle_ok = oracle_ok && got[c].reference_size == want[c][0] &&
                got[c].lexicon_size == want[c][1] &&
                got[c].intersection_size == want[c][2];

  report(7, share_ok && oracle_ok,
         "top-" + std::to_string(kLexiconTop) + " lexicon pool membership " +
             shares + " (floor " + fmt(kLexiconPoolShare) +
             " each); intersection counts " +
             (oracle_ok ? "match" : "DIFFER from") + " the set oracle");
}

// --- criterion 8: optimizer --------------------------------------------------------

void criterion_8() {
  // Scalar quadratic (theta* = 3): window-boundary distances must fall
  // strictly while the run stays above the roundoff floor.
  Tensor theta("theta", {1});
  theta.value = {0.0};
  AmsGradConfig cfg;
  cfg.lr = kOptLr;
  AmsGrad opt({&theta}, cfg);
  std::vector<double> window_ends;
  for (std::size_t s = 1; s <= kOptSteps; ++s) {
    theta.grad[0] = 2.0 * (theta.value[0] - 3.0);
    opt.step();
    if (s % kOptWindow == 0) window_ends.push_back(std::abs(theta.value[0] - 3.0));
  }
  std::size_t violations = 0;
  for (std::size_t w = 1; w < window_ends.size(); ++w)
    if (!(window_ends[w] < window_ends[w - 1])) ++violations;

  // vhat must never decrease under a random gradient stream.
  Tensor p("p", {8});
  AmsGrad vopt({&p});
  Rng rng(2028);
  Vec prev(8, 0.0);
  std::size_t vhat_violations = 0;
  for (std::size_t s = 0; s < kVhatSteps; ++s) {
    for (std::size_t k = 0; k < 8; ++k) p.grad[k] = rng.uniform(-10.0, 10.0);
    vopt.step();
    const auto vh = vopt.vhat(0);
    for (std::size_t k = 0; k < 8; ++k) {
      if (vh[k] < prev[k]) ++vhat_violations;
      prev[k] = vh[k];
    }
  }

  const bool pass = violations == 0 && vhat_violations == 0 &&
                    window_ends.back() < window_ends.front();
  report(8, pass,
         "quadratic |theta - theta*| over " +
             std::to_string(window_ends.size()) + " windows of " +
             std::to_string(kOptWindow) + " steps: " +
             std::to_string(violations) + " non-decreasing boundaries (" +
             fmt(window_ends.front()) + " -> " + fmt(window_ends.back()) +
             "); vhat violations " + std::to_string(vhat_violations) +
             " across " + std::to_string(kVhatSteps) + " random steps");
}

// --- criterion 9: reproducibility ---------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MSC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_9() {
  const fs::path base =
      fs::temp_directory_path() /
      ("msc_accept_" + std::to_string(Clock::now().time_since_epoch().count()));
  std::vector<std::string> mismatched, failed;
  const std::vector<std::string> artifacts = {
      "corpus.csv", "truth.csv",  "pools.csv",  "vocab.txt", "split.csv",
      "repl.csv",   "freq.csv",   "model.bin",  "train.csv", "scores.csv",
      "page.html",  "lex.csv",    "inter.csv"};
  for (const char* run_name : {"a", "b"}) {
    const fs::path dir = base / run_name;
    fs::create_directories(dir);
    auto at = [&](const std::string& f) { return (dir / f).string(); };
    const std::vector<std::string> steps = {
        "synth --out " + at("corpus.csv") + " --truth " + at("truth.csv") +
            " --pools " + at("pools.csv") +
            " --set docs=300 --set seed=21 --set categories=3",
        "preprocess --in " + at("corpus.csv") + " --out-vocab " +
            at("vocab.txt") + " --out-split " + at("split.csv") + " --seed 5",
        "balance --in " + at("corpus.csv") + " --split " + at("split.csv") +
            " --vocab " + at("vocab.txt") + " --out-manifest " +
            at("repl.csv") + " --out-report " + at("freq.csv"),
        "train --in " + at("corpus.csv") + " --split " + at("split.csv") +
            " --vocab " + at("vocab.txt") + " --replication " + at("repl.csv") +
            " --embed-dim 8 --word-hidden 4 --phrase-hidden 3"
            " --batch-size 8 --batches-per-epoch 10 --epochs 5 --lr 0.001"
            " --seed 7 --init-seed 9 --out-model " + at("model.bin") +
            " --out-report " + at("train.csv"),
        "eval --model " + at("model.bin") + " --in " + at("corpus.csv") +
            " --split " + at("split.csv") + " --subset test --out " +
            at("scores.csv"),
        "color --model " + at("model.bin") + " --in " + at("corpus.csv") +
            " --format html --out " + at("page.html"),
        "tag --model " + at("model.bin") + " --in " + at("corpus.csv") +
            " --split " + at("split.csv") + " --subset train --truth " +
            at("truth.csv") + " --reference " + at("pools.csv") +
            " --out-lexicon " + at("lex.csv") + " --out-intersections " +
            at("inter.csv")};
    for (std::size_t s = 0; s < steps.size(); ++s)
      if (run_cli(steps[s]) != 0)
        failed.push_back(std::string(run_name) + "/step" + std::to_string(s));
  }
  if (failed.empty()) {
    for (const std::string& f : artifacts) {
      const std::string a = read_file((base / "a" / f).string());
      const std::string b = read_file((base / "b" / f).string());
      if (a != b) mismatched.push_back(f);
    }
  }
  fs::remove_all(base);

  const bool pass = failed.empty() && mismatched.empty();
  std::string detail = "two same-seed CLI pipeline runs, " +
                       std::to_string(artifacts.size()) +
                       " artifacts compared byte for byte";
  if (!failed.empty()) {
    detail += "; failed steps:";
    for (const std::string& f : failed) detail += " " + f;
  } else if (!mismatched.empty()) {
    detail += "; differing:";
    for (const std::string& f : mismatched) detail += " " + f;
  } else {
    detail += ", all identical";
  }
  report(9, pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  LearnArtifacts art = criterion_6();
  criterion_7(art);
  criterion_8();
  criterion_9();
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
