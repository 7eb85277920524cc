// End-to-end library walkthrough on a synthetic corpus: generate, preprocess,
// split, balance, train a small model, and report test-set metrics.
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "msc/msc.hpp"

using namespace msc;

int main() {
  GeneratorConfig gen;
  gen.docs = 240;
  gen.seed = 11;
  gen.categories = 3;
  gen.length_min = 30;
  gen.length_max = 60;
  SynthCorpus corpus = synthesize_corpus(gen);

  const StopwordSet stop = default_stopwords();
  const Taxonomy tax = default_taxonomy();

  // Split on note ids first; the vocabulary sees training text only.
  std::vector<Document> stubs;
  for (const RawNote& n : corpus.notes)
    stubs.push_back(Document{n.note_id, {}, LabelVector(kNumCategories, 0)});
  CorpusSplit ids = split(stubs, SplitRatios{}, /*seed=*/11);
  std::set<std::string> train_ids;
  for (const Document& d : ids.train) train_ids.insert(d.note_id);

  std::vector<std::vector<std::string>> train_tokens;
  for (const RawNote& n : corpus.notes)
    if (train_ids.count(n.note_id)) train_tokens.push_back(preprocess(n.body, stop));
  Vocabulary vocab = build_vocabulary(train_tokens);

  std::set<std::string> val_ids;
  for (const Document& d : ids.validation) val_ids.insert(d.note_id);
  std::vector<Document> train_docs, val_docs, test_docs;
  for (const RawNote& n : corpus.notes) {
    Document d = make_document(n, vocab, stop, tax);
    if (train_ids.count(n.note_id)) train_docs.push_back(std::move(d));
    else if (val_ids.count(n.note_id)) val_docs.push_back(std::move(d));
    else test_docs.push_back(std::move(d));
  }
  std::printf("corpus: %zu notes, vocabulary %zu words\n", corpus.notes.size(),
              vocab.word_count());

  BalancePlan plan = balance(train_docs);
  std::vector<Document> balanced = replicate_documents(train_docs, plan.counts);
  std::printf("balance: c=%.3f, %zu -> %zu training notes\n", plan.chosen_c,
              train_docs.size(), balanced.size());

  ModelConfig mc;
  mc.embed_dim = 24;
  mc.word_hidden = 12;
  mc.phrase_hidden = 8;
  Rng rng(11);
  MscModel model = make_model(vocab, mc, rng);

  TrainConfig tc;
  tc.batch_size = 16;
  tc.batches_per_epoch = 20;
  tc.epochs = 40;
  tc.seed = 11;
  TrainReport report = train(model, balanced, val_docs, tc);
  std::printf("best validation F1 %.3f at epoch %zu\n", report.best_f1,
              report.best_epoch);

  const MicroMetrics m = evaluate_documents(model, test_docs);
  std::printf("test micro: P=%.3f R=%.3f F1=%.3f\n", m.precision, m.recall,
              m.f1);
  return 0;
}
