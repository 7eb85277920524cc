// Corpus ingestion: raw notes, tokenized documents, vocabulary, splits,
// and the CSV formats that move them between pipeline stages.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msc/common.hpp"
#include "msc/preprocess.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

struct RawNote {
  std::string note_id;
  std::string note_type;   // e.g. "Nursing", "Radiology"
  std::string body;        // nonempty
  std::vector<std::string> fine_codes;
};

// A tokenized, label-vectorized note. Tokens are vocabulary indices and are
// never padded or truncated; documents keep their natural length.
struct Document {
  std::string note_id;
  std::vector<std::uint32_t> tokens;
  LabelVector labels;
};

// Word <-> index bijection over every word in the preprocessed corpus.
// Index 0 is reserved for out-of-vocabulary words at inference time; known
// words occupy 1..word_count() in lexicographic order, so indices are stable
// across runs for identical corpora.
class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<std::string> sorted_words)
      : words_(std::move(sorted_words)) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      index_[words_[i]] = static_cast<std::uint32_t>(i + 1);
    if (index_.size() != words_.size())
      throw DataError("vocabulary word list contains duplicates");
  }

  static constexpr std::uint32_t kOov = 0;

  // Distinct known words.
  std::size_t word_count() const { return words_.size(); }
  // Total index space including the OOV slot; embedding tables use this.
  std::size_t size() const { return words_.size() + 1; }

  std::uint32_t index_of(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? kOov : it->second;
  }

  bool contains(const std::string& word) const { return index_.count(word); }

  // Surface form; index 0 renders as "<oov>".
  const std::string& word_at(std::uint32_t index) const {
    static const std::string oov = "<oov>";
    if (index == kOov) return oov;
    if (index > words_.size())
      throw DataError("token index " + std::to_string(index) +
                      " outside vocabulary of size " + std::to_string(size()));
    return words_[index - 1];
  }

  const std::vector<std::string>& words() const { return words_; }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& w : words_) {
      h = fnv1a64(w, h);
      h = fnv1a64("\n", h);
    }
    return h;
  }

 private:
  std::vector<std::string> words_;
  std::map<std::string, std::uint32_t> index_;
};

// Every word that occurs at least once gets an index (no frequency cutoff).
inline Vocabulary build_vocabulary(
    const std::vector<std::vector<std::string>>& preprocessed_notes) {
  if (preprocessed_notes.empty())
    throw DataError("cannot build a vocabulary from an empty corpus");
  std::set<std::string> distinct;
  for (const auto& note : preprocessed_notes)
    distinct.insert(note.begin(), note.end());
  return Vocabulary(std::vector<std::string>(distinct.begin(), distinct.end()));
}

inline Document make_document(const RawNote& note, const Vocabulary& vocab,
                              const StopwordSet& stopwords, const Taxonomy& tax,
                              UnknownCodePolicy policy =
                                  UnknownCodePolicy::kStrict) {
  Document doc;
  doc.note_id = note.note_id;
  for (const auto& word : preprocess(note.body, stopwords))
    doc.tokens.push_back(vocab.index_of(word));
  doc.labels = rollup_labels(note.fine_codes, tax, policy);
  return doc;
}

// ---------------------------------------------------------------------------
// Train / validation / test split.
// ---------------------------------------------------------------------------
struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct CorpusSplit {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
  SplitRatios ratios;
};

// Deterministic shuffle-then-cut partition at note granularity.
inline CorpusSplit split(std::vector<Document> corpus, SplitRatios ratios,
                         std::uint64_t seed) {
  double sum = ratios.train + ratios.validation + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw DataError("split ratios must sum to 1, got " + format_double(sum));
  if (corpus.size() < 3)
    throw DataError("need at least 3 documents to split, got " +
                    std::to_string(corpus.size()));
  Rng rng(seed);
  rng.shuffle(corpus);
  const std::size_t n = corpus.size();
  std::size_t n_train = static_cast<std::size_t>(
      std::llround(ratios.train * static_cast<double>(n)));
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(ratios.validation * static_cast<double>(n)));
  n_train = std::min(n_train, n);
  n_val = std::min(n_val, n - n_train);
  CorpusSplit out;
  out.ratios = ratios;
  out.train.assign(corpus.begin(), corpus.begin() + static_cast<long>(n_train));
  out.validation.assign(corpus.begin() + static_cast<long>(n_train),
                        corpus.begin() + static_cast<long>(n_train + n_val));
  out.test.assign(corpus.begin() + static_cast<long>(n_train + n_val),
                  corpus.end());
  return out;
}

// ---------------------------------------------------------------------------
// Corpus CSV: header "note_id,note_type,text,codes"; codes are
// semicolon-separated fine codes; the text column is always quoted.
// ---------------------------------------------------------------------------
inline void write_corpus_csv(std::ostream& out,
                             const std::vector<RawNote>& notes) {
  out << "note_id,note_type,text,codes\n";
  for (const auto& note : notes) {
    std::string codes;
    for (std::size_t i = 0; i < note.fine_codes.size(); ++i) {
      if (i) codes.push_back(';');
      codes += note.fine_codes[i];
    }
    csv_write_row(out, {note.note_id, note.note_type, note.body, codes},
                  /*always_quote_index=*/2);
  }
}

inline std::vector<RawNote> read_corpus_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw DataError("corpus CSV is empty");
  if (fields.size() != 4 || fields[0] != "note_id")
    throw ParseError("corpus CSV header must be note_id,note_type,text,codes",
                     reader.line());
  std::vector<RawNote> notes;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
    if (fields.size() != 4)
      throw ParseError("corpus record needs 4 fields, got " +
                           std::to_string(fields.size()),
                       reader.line());
    RawNote note;
    note.note_id = fields[0];
    note.note_type = fields[1];
    note.body = fields[2];
    if (note.body.empty())
      throw ParseError("note " + note.note_id + " has an empty body",
                       reader.line());
    for (auto& code : split(fields[3], ';')) {
      std::string c = trim(code);
      if (!c.empty()) note.fine_codes.push_back(c);
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

inline std::vector<RawNote> read_corpus_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return read_corpus_csv(in);
}

// ---------------------------------------------------------------------------
// Split manifest CSV: note_id,subset with subset in {train,validation,test}.
// ---------------------------------------------------------------------------
inline void write_split_manifest(std::ostream& out, const CorpusSplit& split) {
  out << "note_id,subset\n";
  for (const auto& d : split.train) csv_write_row(out, {d.note_id, "train"});
  for (const auto& d : split.validation)
    csv_write_row(out, {d.note_id, "validation"});
  for (const auto& d : split.test) csv_write_row(out, {d.note_id, "test"});
}

// note_id -> subset name.
inline std::map<std::string, std::string> read_split_manifest(
    std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 2 || fields[0] != "note_id")
    throw DataError("split manifest header must be note_id,subset");
  std::map<std::string, std::string> subsets;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2)
      throw ParseError("split manifest record needs 2 fields", reader.line());
    if (fields[1] != "train" && fields[1] != "validation" && fields[1] != "test")
      throw ParseError("unknown subset \"" + fields[1] + "\"", reader.line());
    if (!subsets.emplace(fields[0], fields[1]).second)
      throw ParseError("duplicate note_id \"" + fields[0] + "\"",
                       reader.line());
  }
  return subsets;
}

// Vocabulary file: one word per line in index order (index = line number).
inline void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const auto& w : vocab.words()) out << w << '\n';
}

inline Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim(line);
    if (!w.empty()) words.push_back(std::move(w));
  }
  if (!std::is_sorted(words.begin(), words.end()))
    throw DataError("vocabulary file is not in lexicographic order");
  return Vocabulary(std::move(words));
}

}  // namespace msc
