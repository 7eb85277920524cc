// Synthetic corpus generator for desk-scale experiments. Every category
// gets a private pool of invented alphabetic words; a note draws a length
// and a target keyword coverage, plants one labeled keyword segment per
// chosen category and fills the gaps from a shared filler pool. The true
// segment boundaries are recorded exactly. Generated words survive
// preprocessing unchanged (lowercase letters only, never stopwords), which
// keeps recorded spans aligned with token positions.
#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msc/corpus.hpp"
#include "msc/stopwords.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

struct GeneratorConfig {
  std::size_t docs = 600;
  std::uint64_t seed = 1;
  std::size_t categories = kNumCategories;  // category indices [0, categories)
  std::size_t labels_min = 1;
  std::size_t labels_max = 1;
  std::size_t length_min = 30;  // tokens per note
  std::size_t length_max = 80;
  double coverage_min = 0.60;  // fraction of tokens inside labeled segments
  double coverage_max = 0.75;
  std::size_t keywords_per_category = 30;
  std::size_t filler_words = 200;
};

inline void apply_setting(GeneratorConfig& cfg, const std::string& key,
                          const std::string& value) {
  auto num = [&](std::size_t lo) {
    const long long v = parse_long(value, 0);
    if (v < static_cast<long long>(lo))
      throw DataError("generator setting " + key + " must be >= " +
                      std::to_string(lo));
    return static_cast<std::size_t>(v);
  };
  if (key == "docs") cfg.docs = num(1);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, 0));
  else if (key == "categories") cfg.categories = num(1);
  else if (key == "labels_min") cfg.labels_min = num(1);
  else if (key == "labels_max") cfg.labels_max = num(1);
  else if (key == "length_min") cfg.length_min = num(1);
  else if (key == "length_max") cfg.length_max = num(1);
  else if (key == "coverage_min") cfg.coverage_min = parse_double(value, 0);
  else if (key == "coverage_max") cfg.coverage_max = parse_double(value, 0);
  else if (key == "keywords_per_category") cfg.keywords_per_category = num(1);
  else if (key == "filler_words") cfg.filler_words = num(1);
  else throw DataError("unknown generator setting: " + key);
}

inline void validate(const GeneratorConfig& cfg) {
  if (cfg.categories > kNumCategories)
    throw DataError("generator: at most " + std::to_string(kNumCategories) +
                    " categories are available");
  if (cfg.labels_min > cfg.labels_max || cfg.length_min > cfg.length_max)
    throw DataError("generator: min settings must not exceed max settings");
  if (cfg.labels_max > cfg.categories)
    throw DataError("generator: labels_max exceeds the category count");
  if (cfg.coverage_min <= 0.0 || cfg.coverage_max >= 1.0 ||
      cfg.coverage_min > cfg.coverage_max)
    throw DataError("generator: coverage must satisfy 0 < min <= max < 1");
  if (static_cast<double>(cfg.length_min) * cfg.coverage_min <
      static_cast<double>(cfg.labels_max))
    throw DataError("generator: notes are too short for the label count");
}

// True segment location in token offsets, end exclusive.
struct GtSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  int category = -1;
};

struct SynthCorpus {
  std::vector<RawNote> notes;
  std::vector<std::vector<GtSpan>> spans;  // parallel to notes
  std::array<std::vector<std::string>, kNumCategories> keyword_pools;
  std::vector<std::string> filler_pool;
};

namespace detail {

// Pronounceable pseudo-word: 2-4 consonant+vowel syllables.
inline std::string invent_word(Rng& rng) {
  static constexpr char kCons[] = "bcdfghjklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  const std::size_t syllables = rng.range(2, 4);
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kCons[rng.below(sizeof(kCons) - 1)];
    w += kVowels[rng.below(sizeof(kVowels) - 1)];
  }
  return w;
}

inline std::vector<std::string> invent_pool(Rng& rng, std::size_t count,
                                            const StopwordSet& stop,
                                            std::set<std::string>& used) {
  std::vector<std::string> pool;
  pool.reserve(count);
  std::size_t attempts = 0;
  while (pool.size() < count) {
    if (++attempts > 1000000)
      throw DataError("generator: cannot invent enough distinct words");
    std::string w = invent_word(rng);
    if (stop.count(w) || used.count(w)) continue;
    used.insert(w);
    pool.push_back(std::move(w));
  }
  return pool;
}

// Random composition of `total` into `parts` nonnegative runs.
inline std::vector<std::size_t> random_composition(Rng& rng, std::size_t total,
                                                   std::size_t parts) {
  std::vector<std::size_t> cuts(parts - 1);
  for (auto& c : cuts) c = rng.below(total + 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> out(parts);
  std::size_t prev = 0;
  for (std::size_t i = 0; i + 1 < parts; ++i) {
    out[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  out[parts - 1] = total - prev;
  return out;
}

}  // namespace detail

// Fine code reported for a planted category: the low end of its range,
// zero-padded to the usual three digits.
inline std::string fine_code_for(int category) {
  const int lo = category_table()[static_cast<std::size_t>(category)].code_lo;
  std::string s = std::to_string(lo);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

inline SynthCorpus synthesize_corpus(const GeneratorConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  const StopwordSet stop = default_stopwords();

  SynthCorpus out;
  std::set<std::string> used;
  for (std::size_t c = 0; c < cfg.categories; ++c)
    out.keyword_pools[c] =
        detail::invent_pool(rng, cfg.keywords_per_category, stop, used);
  out.filler_pool = detail::invent_pool(rng, cfg.filler_words, stop, used);

  static constexpr const char* kNoteTypes[] = {
      "discharge summary", "radiology report", "nursing note",
      "consult note"};

  out.notes.reserve(cfg.docs);
  out.spans.reserve(cfg.docs);
  std::vector<int> cats(cfg.categories);
  for (std::size_t i = 0; i < cfg.categories; ++i) cats[i] = static_cast<int>(i);

  for (std::size_t d = 0; d < cfg.docs; ++d) {
    const std::size_t label_count = rng.range(cfg.labels_min, cfg.labels_max);
    rng.shuffle(cats);
    std::vector<int> chosen(cats.begin(),
                            cats.begin() + static_cast<std::ptrdiff_t>(label_count));

    const std::size_t length = rng.range(cfg.length_min, cfg.length_max);
    const double coverage = rng.uniform(cfg.coverage_min, cfg.coverage_max);
    std::size_t keyword_total = static_cast<std::size_t>(
        std::floor(static_cast<double>(length) * coverage + 0.5));
    keyword_total = std::max(keyword_total, label_count);
    keyword_total = std::min(keyword_total, length);

    // Segment lengths: an even split of the keyword budget.
    std::vector<std::size_t> seg_len(label_count,
                                     keyword_total / label_count);
    for (std::size_t i = 0; i < keyword_total % label_count; ++i)
      ++seg_len[i];
    const std::vector<std::size_t> filler_len = detail::random_composition(
        rng, length - keyword_total, label_count + 1);

    std::vector<std::string> words;
    words.reserve(length);
    std::vector<GtSpan> spans;
    auto filler_run = [&](std::size_t len) {
      for (std::size_t i = 0; i < len; ++i)
        words.push_back(out.filler_pool[rng.below(out.filler_pool.size())]);
    };

    filler_run(filler_len[0]);
    for (std::size_t s = 0; s < label_count; ++s) {
      const auto& pool = out.keyword_pools[static_cast<std::size_t>(chosen[s])];
      GtSpan span{words.size(), words.size() + seg_len[s], chosen[s]};
      for (std::size_t i = 0; i < seg_len[s]; ++i)
        words.push_back(pool[rng.below(pool.size())]);
      spans.push_back(span);
      filler_run(filler_len[s + 1]);
    }

    RawNote note;
    char id[16];
    std::snprintf(id, sizeof(id), "note-%06zu", d + 1);
    note.note_id = id;
    note.note_type = kNoteTypes[d % 4];
    note.body = join_tokens(words);
    for (int cat : chosen) note.fine_codes.push_back(fine_code_for(cat));
    out.notes.push_back(std::move(note));
    out.spans.push_back(std::move(spans));
  }
  return out;
}

// --- ground-truth sidecar -----------------------------------------------------

inline void write_ground_truth(std::ostream& out,
                               const std::vector<RawNote>& notes,
                               const std::vector<std::vector<GtSpan>>& spans) {
  if (notes.size() != spans.size())
    throw std::invalid_argument("ground truth rows do not match notes");
  csv_write_row(out, {"note_id", "start", "end", "category"});
  for (std::size_t i = 0; i < notes.size(); ++i)
    for (const GtSpan& s : spans[i])
      csv_write_row(out, {notes[i].note_id, std::to_string(s.start),
                          std::to_string(s.end), std::to_string(s.category)});
}

inline std::map<std::string, std::vector<GtSpan>> read_ground_truth(
    std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row) || row != std::vector<std::string>{"note_id", "start",
                                                           "end", "category"})
    throw ParseError("ground truth header must be note_id,start,end,category",
                     reader.line());
  std::map<std::string, std::vector<GtSpan>> out;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 4)
      throw ParseError("ground truth row needs 4 fields", reader.line());
    GtSpan s;
    s.start = static_cast<std::size_t>(parse_long(row[1], reader.line()));
    s.end = static_cast<std::size_t>(parse_long(row[2], reader.line()));
    s.category = static_cast<int>(parse_long(row[3], reader.line()));
    if (s.end < s.start)
      throw ParseError("ground truth span ends before it starts",
                       reader.line());
    if (s.category < 0 || s.category >= static_cast<int>(kNumCategories))
      throw ParseError("ground truth category out of range", reader.line());
    out[row[0]].push_back(s);
  }
  return out;
}

// Pools in a plain inspectable layout: "<category index><TAB><words...>",
// filler last under index -1.
inline void write_pools(std::ostream& out, const SynthCorpus& corpus) {
  for (std::size_t c = 0; c < corpus.keyword_pools.size(); ++c) {
    if (corpus.keyword_pools[c].empty()) continue;
    out << c << '\t' << join_tokens(corpus.keyword_pools[c]) << '\n';
  }
  out << -1 << '\t' << join_tokens(corpus.filler_pool) << '\n';
}

// Pools file as a reference vocabulary for lexicon intersection scoring.
// The filler row (index -1) is skipped.
inline CategoryVocabulary read_pools_as_reference(std::istream& in) {
  CategoryVocabulary ref;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("pools line needs '<index>\\t<words>'", line_no);
    const std::string head = line.substr(0, tab);
    if (head == "-1") continue;
    long idx = -1;
    try {
      idx = std::stol(head);
    } catch (const std::exception&) {
      throw ParseError("pools index is not a number: " + head, line_no);
    }
    if (idx < 0 || idx >= static_cast<long>(kNumCategories))
      throw ParseError("pools index out of range: " + head, line_no);
    std::istringstream words(line.substr(tab + 1));
    std::string w;
    while (words >> w) ref.words[static_cast<std::size_t>(idx)].insert(w);
  }
  return ref;
}

}  // namespace msc
