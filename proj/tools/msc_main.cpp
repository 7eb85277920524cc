// Command-line front end for the medical segment colorer. One executable,
// one subcommand per pipeline stage:
//   synth       generate a synthetic labeled corpus
//   preprocess  tokenize, split, and build the vocabulary
//   balance     compute replication counts for the training subset
//   train       fit the word/phrase/document model
//   eval        document-level micro metrics on a subset
//   color       render tagged notes as ANSI or HTML
//   tag         build per-category lexicons and tagging reports
// Exit codes: 0 success, 1 usage, 2 data/validation error, 3 numeric error.
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "msc/msc.hpp"

namespace {

using namespace msc;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline surprises
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  return in;
}

StopwordSet stopwords_from(const std::string& path) {
  return path.empty() ? default_stopwords() : load_stopwords(path);
}

Taxonomy taxonomy_from(const std::string& path) {
  return path.empty() ? default_taxonomy() : load_taxonomy(path);
}

// --- shared corpus plumbing -------------------------------------------------

struct LoadedCorpus {
  std::vector<RawNote> notes;
  std::map<std::string, std::string> subsets;  // empty if no manifest given
};

LoadedCorpus load_corpus(const std::string& corpus_path,
                         const std::string& split_path) {
  LoadedCorpus out;
  {
    auto in = open_in(corpus_path);
    out.notes = read_corpus_csv(in);
  }
  if (!split_path.empty()) {
    auto in = open_in(split_path);
    out.subsets = read_split_manifest(in);
    for (const RawNote& n : out.notes)
      if (!out.subsets.count(n.note_id))
        throw DataError("note " + n.note_id + " missing from split manifest");
  }
  return out;
}

std::vector<Document> to_documents(const std::vector<RawNote>& notes,
                                   const Vocabulary& vocab,
                                   const StopwordSet& stop,
                                   const Taxonomy& tax,
                                   UnknownCodePolicy policy) {
  std::vector<Document> docs;
  docs.reserve(notes.size());
  for (const RawNote& n : notes)
    docs.push_back(make_document(n, vocab, stop, tax, policy));
  return docs;
}

std::vector<Document> pick_subset(
    const std::vector<Document>& docs,
    const std::map<std::string, std::string>& manifest,
    const std::string& which) {
  std::vector<Document> out;
  for (const Document& d : docs)
    if (manifest.at(d.note_id) == which) out.push_back(d);
  return out;
}

const std::string& check_subset_name(const std::string& name) {
  if (name != "train" && name != "validation" && name != "test")
    throw DataError("unknown subset: " + name +
                    " (expected train, validation, or test)");
  return name;
}

// --- subcommands --------------------------------------------------------------

struct SynthArgs {
  std::string out, truth, pools;
  std::vector<std::string> settings;
};

int run_synth(const SynthArgs& a) {
  GeneratorConfig cfg;
  for (const std::string& kv : a.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw DataError("generator settings use key=value, got: " + kv);
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  SynthCorpus corpus = synthesize_corpus(cfg);
  {
    auto out = open_out(a.out);
    write_corpus_csv(out, corpus.notes);
  }
  if (!a.truth.empty()) {
    auto out = open_out(a.truth);
    write_ground_truth(out, corpus.notes, corpus.spans);
  }
  if (!a.pools.empty()) {
    auto out = open_out(a.pools);
    write_pools(out, corpus);
  }
  std::cerr << "wrote " << corpus.notes.size() << " notes to " << a.out
            << "\n";
  return 0;
}

struct PreprocessArgs {
  std::string in, out_vocab, out_split, stopwords;
  std::uint64_t seed = 1;
  std::vector<double> ratios{0.6, 0.2, 0.2};
};

int run_preprocess(const PreprocessArgs& a) {
  const StopwordSet stop = stopwords_from(a.stopwords);
  LoadedCorpus corpus = load_corpus(a.in, "");

  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(corpus.notes.size());
  std::size_t token_total = 0;
  for (const RawNote& n : corpus.notes) {
    token_lists.push_back(preprocess(n.body, stop));
    token_total += token_lists.back().size();
  }

  if (a.ratios.size() != 3)
    throw DataError("--ratios needs exactly three values");
  SplitRatios ratios{a.ratios[0], a.ratios[1], a.ratios[2]};

  // The split is computed on note ids; the vocabulary comes from the
  // training subset only, so held-out words are genuine OOV cases.
  std::vector<Document> stubs;
  stubs.reserve(corpus.notes.size());
  for (const RawNote& n : corpus.notes)
    stubs.push_back(Document{n.note_id, {}, LabelVector(kNumCategories, 0)});
  CorpusSplit split_ids = split(stubs, ratios, a.seed);

  std::set<std::string> train_ids;
  for (const Document& d : split_ids.train) train_ids.insert(d.note_id);
  std::vector<std::vector<std::string>> train_tokens;
  for (std::size_t i = 0; i < corpus.notes.size(); ++i)
    if (train_ids.count(corpus.notes[i].note_id))
      train_tokens.push_back(token_lists[i]);
  Vocabulary vocab = build_vocabulary(train_tokens);

  {
    auto out = open_out(a.out_vocab);
    write_vocabulary(out, vocab);
  }
  {
    auto out = open_out(a.out_split);
    write_split_manifest(out, split_ids);
  }
  std::cerr << corpus.notes.size() << " notes, " << token_total
            << " tokens, vocabulary " << vocab.word_count() << " words ("
            << split_ids.train.size() << "/" << split_ids.validation.size()
            << "/" << split_ids.test.size() << " split)\n";
  return 0;
}

struct BalanceArgs {
  std::string in, split, vocab, out_manifest, out_report, stopwords, taxonomy;
  bool warn_unknown_codes = false;
};

int run_balance(const BalanceArgs& a) {
  const StopwordSet stop = stopwords_from(a.stopwords);
  const Taxonomy tax = taxonomy_from(a.taxonomy);
  LoadedCorpus corpus = load_corpus(a.in, a.split);
  Vocabulary vocab = [&] {
    auto in = open_in(a.vocab);
    return read_vocabulary(in);
  }();
  const auto policy = a.warn_unknown_codes ? UnknownCodePolicy::kWarnSkip
                                           : UnknownCodePolicy::kStrict;
  std::vector<Document> docs = to_documents(corpus.notes, vocab, stop, tax, policy);
  std::vector<Document> train = pick_subset(docs, corpus.subsets, "train");

  BalancePlan plan = balance(train);
  {
    auto out = open_out(a.out_manifest);
    write_replication_manifest(out, train, plan.counts);
  }
  if (!a.out_report.empty()) {
    auto out = open_out(a.out_report);
    write_frequency_report(out, plan.before, plan.after);
  }
  std::size_t total = 0;
  for (std::size_t c : plan.counts) total += c;
  std::cerr << "candidate k=" << plan.chosen_k << " (c="
            << format_double(plan.chosen_c) << ", score "
            << format_double(plan.score) << "): " << train.size()
            << " notes -> " << total << " after replication\n";
  return 0;
}

struct TrainArgs {
  std::string in, split, vocab, replication, embeddings;
  std::string out_model, out_report, stopwords, taxonomy;
  ModelConfig model;
  TrainConfig trainer;
  std::uint64_t init_seed = 1;
  bool warn_unknown_codes = false;
};

int run_train(const TrainArgs& a) {
  const StopwordSet stop = stopwords_from(a.stopwords);
  const Taxonomy tax = taxonomy_from(a.taxonomy);
  LoadedCorpus corpus = load_corpus(a.in, a.split);
  Vocabulary vocab = [&] {
    auto in = open_in(a.vocab);
    return read_vocabulary(in);
  }();
  const auto policy = a.warn_unknown_codes ? UnknownCodePolicy::kWarnSkip
                                           : UnknownCodePolicy::kStrict;
  std::vector<Document> docs = to_documents(corpus.notes, vocab, stop, tax, policy);
  std::vector<Document> train_docs = pick_subset(docs, corpus.subsets, "train");
  std::vector<Document> val_docs =
      pick_subset(docs, corpus.subsets, "validation");

  if (!a.replication.empty()) {
    auto in = open_in(a.replication);
    const auto counts = read_replication_manifest(in);
    std::vector<Document> replicated;
    for (const Document& d : train_docs) {
      const auto it = counts.find(d.note_id);
      if (it == counts.end())
        throw DataError("note " + d.note_id +
                        " missing from replication manifest");
      for (std::size_t i = 0; i < it->second; ++i) replicated.push_back(d);
    }
    train_docs = std::move(replicated);
  }

  Rng init_rng(a.init_seed);
  MscModel model = make_model(std::move(vocab), a.model, init_rng);
  if (!a.embeddings.empty()) {
    Rng fill_rng = init_rng.fork(1);
    model.embeddings =
        load_embeddings(a.embeddings, model.vocab, a.model.embed_dim, fill_rng);
    model.embeddings.name = "embeddings";
  }

  TrainReport report = train(model, train_docs, val_docs, a.trainer, &std::cerr);
  save_checkpoint(model, a.out_model);
  if (!a.out_report.empty()) {
    auto out = open_out(a.out_report);
    write_train_report(out, report);
  }
  std::cerr << "best validation F1 " << format_double(report.best_f1)
            << " at epoch " << report.best_epoch << " ("
            << format_double(report.wall_seconds) << "s); model saved to "
            << a.out_model << "\n";
  return 0;
}

struct EvalArgs {
  std::string model, in, split, subset = "test", out, stopwords, taxonomy;
  double threshold = 0.5;
  bool warn_unknown_codes = false;
};

int run_eval(const EvalArgs& a) {
  MscModel model = load_checkpoint(a.model);
  const StopwordSet stop = stopwords_from(a.stopwords);
  const Taxonomy tax = taxonomy_from(a.taxonomy);
  LoadedCorpus corpus = load_corpus(a.in, a.split);
  const auto policy = a.warn_unknown_codes ? UnknownCodePolicy::kWarnSkip
                                           : UnknownCodePolicy::kStrict;
  std::vector<Document> docs =
      to_documents(corpus.notes, model.vocab, stop, tax, policy);
  if (!corpus.subsets.empty())
    docs = pick_subset(docs, corpus.subsets, check_subset_name(a.subset));
  std::vector<Document> usable;
  for (Document& d : docs)
    if (!d.tokens.empty()) usable.push_back(std::move(d));
  if (usable.size() != docs.size())
    std::cerr << "skipping " << docs.size() - usable.size()
              << " empty documents\n";
  if (usable.empty()) throw DataError("no documents to evaluate");

  const std::vector<Vec> scores = score_documents(model, usable);
  std::vector<LabelVector> targets;
  for (const Document& d : usable) targets.push_back(d.labels);
  const MicroMetrics m = micro_metrics(scores, targets, a.threshold);

  if (!a.out.empty()) {
    auto out = open_out(a.out);
    std::vector<std::string> header{"note_id"};
    for (std::size_t c = 0; c < kNumCategories; ++c)
      header.push_back("cat" + std::to_string(c));
    csv_write_row(out, header);
    for (std::size_t d = 0; d < usable.size(); ++d) {
      std::vector<std::string> row{usable[d].note_id};
      for (double s : scores[d]) row.push_back(format_double(s));
      csv_write_row(out, row);
    }
  }
  std::cout << "documents " << usable.size() << "\nprecision "
            << format_double(m.precision) << "\nrecall "
            << format_double(m.recall) << "\nf1 " << format_double(m.f1)
            << "\ntp " << m.tp << "\nfp " << m.fp << "\nfn " << m.fn << "\n";
  return 0;
}

struct ColorArgs {
  std::string model, in, out, format = "ansi", stopwords;
  bool strict_window = false;
  bool mask_classes = false;
  double threshold = 0.5;
};

int run_color(const ColorArgs& a) {
  MscModel model = load_checkpoint(a.model);
  const StopwordSet stop = stopwords_from(a.stopwords);
  TagConfig tag_cfg;
  tag_cfg.threshold = a.threshold;
  tag_cfg.strict_window = a.strict_window;
  tag_cfg.mode = a.mask_classes ? ThresholdMode::kMaskClasses
                                : ThresholdMode::kDiscardVote;

  // Input: a corpus CSV (by extension) or a plain-text note.
  std::vector<std::pair<std::string, std::vector<std::string>>> items;
  if (a.in.size() >= 4 && a.in.substr(a.in.size() - 4) == ".csv") {
    auto in = open_in(a.in);
    for (const RawNote& n : read_corpus_csv(in))
      items.emplace_back(n.note_id, preprocess(n.body, stop));
  } else {
    items.emplace_back(a.in, preprocess(read_file(a.in), stop));
  }

  std::vector<RenderedNote> rendered;
  for (auto& [title, tokens] : items) {
    if (tokens.empty()) {
      std::cerr << "skipping empty note " << title << "\n";
      continue;
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const std::string& w : tokens) ids.push_back(model.vocab.index_of(w));
    ModelOutputs fwd = forward_values(model, ids);
    WordTagSequence tags =
        tag_words(fwd.phrase_probs, ids.size(), model.cfg.window, tag_cfg);
    rendered.push_back({title, std::move(tokens), segment(tags)});
  }
  if (rendered.empty()) throw DataError("no renderable notes in " + a.in);

  std::string text;
  if (a.format == "html") {
    text = render_html(rendered);
  } else if (a.format == "ansi") {
    for (const RenderedNote& r : rendered)
      text += render_ansi(r.tokens, r.segments) + "\n";
  } else {
    throw DataError("unknown format: " + a.format + " (expected ansi or html)");
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    auto out = open_out(a.out);
    out << text;
  }
  return 0;
}

struct TagArgs {
  std::string model, in, split, subset, truth, reference;
  std::string out_lexicon, out_intersections, stopwords;
  bool strict_window = false;
  bool mask_classes = false;
  double threshold = 0.5;
  std::size_t top = kLexiconReportTop;
};

int run_tag(const TagArgs& a) {
  MscModel model = load_checkpoint(a.model);
  const StopwordSet stop = stopwords_from(a.stopwords);
  const Taxonomy tax = default_taxonomy();
  LoadedCorpus corpus = load_corpus(a.in, a.split);
  TagConfig tag_cfg;
  tag_cfg.threshold = a.threshold;
  tag_cfg.strict_window = a.strict_window;
  tag_cfg.mode = a.mask_classes ? ThresholdMode::kMaskClasses
                                : ThresholdMode::kDiscardVote;

  std::vector<Document> docs =
      to_documents(corpus.notes, model.vocab, stop, tax,
                   UnknownCodePolicy::kWarnSkip);
  if (!corpus.subsets.empty() && !a.subset.empty())
    docs = pick_subset(docs, corpus.subsets, check_subset_name(a.subset));

  TagLexicon lexicon;
  std::vector<WordTagSequence> all_tags;
  std::vector<const Document*> tagged_docs;
  for (const Document& d : docs) {
    if (d.tokens.empty()) continue;
    ModelOutputs fwd = forward_values(model, d.tokens);
    WordTagSequence tags =
        tag_words(fwd.phrase_probs, d.tokens.size(), model.cfg.window, tag_cfg);
    add_to_lexicon(lexicon, d, tags, model.vocab);
    all_tags.push_back(std::move(tags));
    tagged_docs.push_back(&d);
  }

  CategoryVocabulary ref;
  if (a.reference.empty()) {
    ref = category_vocabulary(tax, stop);
  } else {
    auto in = open_in(a.reference);
    ref = read_pools_as_reference(in);
  }
  if (!a.out_lexicon.empty()) {
    auto out = open_out(a.out_lexicon);
    write_lexicon_report(out, lexicon, ref, a.top);
  }
  if (!a.out_intersections.empty()) {
    auto out = open_out(a.out_intersections);
    write_intersection_report(out, score_lexicon(lexicon, ref));
  }

  if (!a.truth.empty()) {
    auto in = open_in(a.truth);
    const auto truth = read_ground_truth(in);
    std::vector<std::vector<GtSpan>> spans;
    for (const Document* d : tagged_docs) {
      const auto it = truth.find(d->note_id);
      spans.push_back(it == truth.end() ? std::vector<GtSpan>{} : it->second);
    }
    const MicroMetrics m = token_tag_metrics(all_tags, spans);
    std::cout << "token_precision " << format_double(m.precision)
              << "\ntoken_recall " << format_double(m.recall)
              << "\ntoken_f1 " << format_double(m.f1) << "\n";
  }
  std::size_t tagged = 0, total = 0;
  for (const auto& tags : all_tags) {
    total += tags.size();
    for (int t : tags) tagged += t >= 0;
  }
  std::cerr << "tagged " << tagged << " of " << total << " tokens across "
            << all_tags.size() << " notes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medical segment colorer"};
  app.set_version_flag("--version", "msc 1.0.0");
  app.set_config("--config", "", "Read default flag values from an INI file");
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--out", synth_args.out, "Corpus CSV to write")->required();
  synth_cmd->add_option("--truth", synth_args.truth, "Segment ground-truth CSV");
  synth_cmd->add_option("--pools", synth_args.pools, "Keyword pool listing");
  synth_cmd->add_option("--set", synth_args.settings,
                        "Generator setting key=value (repeatable); keys: docs, "
                        "seed, categories, labels_min, labels_max, length_min, "
                        "length_max, coverage_min, coverage_max, "
                        "keywords_per_category, filler_words");

  PreprocessArgs pre_args;
  auto* pre_cmd =
      app.add_subcommand("preprocess", "Tokenize, split, and build the vocabulary");
  pre_cmd->add_option("--in", pre_args.in, "Corpus CSV")->required();
  pre_cmd->add_option("--out-vocab", pre_args.out_vocab, "Vocabulary file")->required();
  pre_cmd->add_option("--out-split", pre_args.out_split, "Split manifest CSV")->required();
  pre_cmd->add_option("--seed", pre_args.seed, "Split shuffle seed");
  pre_cmd->add_option("--ratios", pre_args.ratios,
                      "Train/validation/test fractions (three values)")
      ->expected(3);
  pre_cmd->add_option("--stopwords", pre_args.stopwords, "Stopword list file");

  BalanceArgs bal_args;
  auto* bal_cmd = app.add_subcommand("balance", "Plan label-balancing replication");
  bal_cmd->add_option("--in", bal_args.in, "Corpus CSV")->required();
  bal_cmd->add_option("--split", bal_args.split, "Split manifest CSV")->required();
  bal_cmd->add_option("--vocab", bal_args.vocab, "Vocabulary file")->required();
  bal_cmd->add_option("--out-manifest", bal_args.out_manifest,
                      "Replication manifest CSV")->required();
  bal_cmd->add_option("--out-report", bal_args.out_report,
                      "Before/after frequency CSV");
  bal_cmd->add_option("--stopwords", bal_args.stopwords, "Stopword list file");
  bal_cmd->add_option("--taxonomy", bal_args.taxonomy, "Taxonomy tree file");
  bal_cmd->add_flag("--warn-unknown-codes", bal_args.warn_unknown_codes,
                    "Skip unknown fine codes with a warning instead of failing");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train the model");
  train_cmd->add_option("--in", train_args.in, "Corpus CSV")->required();
  train_cmd->add_option("--split", train_args.split, "Split manifest CSV")->required();
  train_cmd->add_option("--vocab", train_args.vocab, "Vocabulary file")->required();
  train_cmd->add_option("--replication", train_args.replication,
                        "Replication manifest from `balance`");
  train_cmd->add_option("--embeddings", train_args.embeddings,
                        "Pre-trained word vectors (text format)");
  train_cmd->add_option("--out-model", train_args.out_model, "Checkpoint path")->required();
  train_cmd->add_option("--out-report", train_args.out_report, "Per-epoch CSV report");
  train_cmd->add_option("--embed-dim", train_args.model.embed_dim, "Embedding size");
  train_cmd->add_option("--word-hidden", train_args.model.word_hidden,
                        "Word GRU size per direction");
  train_cmd->add_option("--phrase-hidden", train_args.model.phrase_hidden,
                        "Phrase GRU size per direction");
  train_cmd->add_option("--window", train_args.model.window, "Phrase window");
  train_cmd->add_option("--batch-size", train_args.trainer.batch_size, "Batch size");
  train_cmd->add_option("--batches-per-epoch", train_args.trainer.batches_per_epoch,
                        "Batches sampled per epoch");
  train_cmd->add_option("--epochs", train_args.trainer.epochs, "Epoch count");
  train_cmd->add_option("--lr", train_args.trainer.lr, "Learning rate");
  train_cmd->add_option("--seed", train_args.trainer.seed, "Batch sampling seed");
  train_cmd->add_option("--init-seed", train_args.init_seed,
                        "Parameter initialization seed");
  train_cmd->add_option("--stopwords", train_args.stopwords, "Stopword list file");
  train_cmd->add_option("--taxonomy", train_args.taxonomy, "Taxonomy tree file");
  train_cmd->add_flag("--warn-unknown-codes", train_args.warn_unknown_codes,
                      "Skip unknown fine codes with a warning instead of failing");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate document predictions");
  eval_cmd->add_option("--model", eval_args.model, "Checkpoint path")->required();
  eval_cmd->add_option("--in", eval_args.in, "Corpus CSV")->required();
  eval_cmd->add_option("--split", eval_args.split, "Split manifest CSV");
  eval_cmd->add_option("--subset", eval_args.subset,
                       "Subset to evaluate (train, validation, test)");
  eval_cmd->add_option("--threshold", eval_args.threshold, "Decision threshold");
  eval_cmd->add_option("--out", eval_args.out, "Per-document score CSV");
  eval_cmd->add_option("--stopwords", eval_args.stopwords, "Stopword list file");
  eval_cmd->add_option("--taxonomy", eval_args.taxonomy, "Taxonomy tree file");
  eval_cmd->add_flag("--warn-unknown-codes", eval_args.warn_unknown_codes,
                     "Skip unknown fine codes with a warning instead of failing");

  ColorArgs color_args;
  auto* color_cmd = app.add_subcommand("color", "Render colored segments");
  color_cmd->add_option("--model", color_args.model, "Checkpoint path")->required();
  color_cmd->add_option("--in", color_args.in,
                        "Input note (plain text) or corpus CSV")->required();
  color_cmd->add_option("--format", color_args.format, "ansi or html");
  color_cmd->add_option("--out", color_args.out, "Output file (default stdout)");
  color_cmd->add_option("--threshold", color_args.threshold, "Tagging threshold");
  color_cmd->add_flag("--strict-window", color_args.strict_window,
                      "Only tag tokens with a full covering window set");
  color_cmd->add_flag("--mask-classes", color_args.mask_classes,
                      "Let sub-threshold phrases abstain instead of blocking");
  color_cmd->add_option("--stopwords", color_args.stopwords, "Stopword list file");

  TagArgs tag_args;
  auto* tag_cmd = app.add_subcommand("tag", "Build lexicons and tagging reports");
  tag_cmd->add_option("--model", tag_args.model, "Checkpoint path")->required();
  tag_cmd->add_option("--in", tag_args.in, "Corpus CSV")->required();
  tag_cmd->add_option("--split", tag_args.split, "Split manifest CSV");
  tag_cmd->add_option("--subset", tag_args.subset, "Restrict to one subset");
  tag_cmd->add_option("--truth", tag_args.truth,
                      "Ground-truth spans for token metrics");
  tag_cmd->add_option("--out-lexicon", tag_args.out_lexicon, "Lexicon CSV");
  tag_cmd->add_option("--out-intersections", tag_args.out_intersections,
                      "Reference intersection CSV");
  tag_cmd->add_option(
      "--reference", tag_args.reference,
      "Keyword pools file to use as the intersection reference "
      "(default: category description vocabulary)");
  tag_cmd->add_option("--top", tag_args.top, "Words per category in the lexicon CSV");
  tag_cmd->add_option("--threshold", tag_args.threshold, "Tagging threshold");
  tag_cmd->add_flag("--strict-window", tag_args.strict_window,
                    "Only tag tokens with a full covering window set");
  tag_cmd->add_flag("--mask-classes", tag_args.mask_classes,
                    "Let sub-threshold phrases abstain instead of blocking");
  tag_cmd->add_option("--stopwords", tag_args.stopwords, "Stopword list file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 1;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (pre_cmd->parsed()) return run_preprocess(pre_args);
    if (bal_cmd->parsed()) return run_balance(bal_args);
    if (train_cmd->parsed()) return run_train(train_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (color_cmd->parsed()) return run_color(color_args);
    if (tag_cmd->parsed()) return run_tag(tag_args);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}
