// From phrase allocations to colored text. A token is tagged when every
// phrase window covering it votes for the same category with probability
// at least 0.5; runs of equal tags become segments; segments drive the
// ANSI / HTML renderers and the per-category lexicons.
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "msc/corpus.hpp"
#include "msc/metrics.hpp"
#include "msc/model.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

inline constexpr int kNoTag = -1;

// How a phrase whose maximum probability falls below the threshold takes
// part in the vote: kDiscardVote casts an explicit empty vote that blocks
// unanimity (the default reading); kMaskClasses makes the phrase abstain,
// so agreement is only required among confident phrases.
enum class ThresholdMode { kDiscardVote, kMaskClasses };

struct TagConfig {
  double threshold = 0.5;
  bool strict_window = false;  // require a full-size covering set
  ThresholdMode mode = ThresholdMode::kDiscardVote;
};

using WordTagSequence = std::vector<int>;

// Tags each of the n tokens from its covering phrase rows. Phrase s spans
// tokens [s, s+W-1], so the covering set of token t is
// s in [max(0, t-W+1), min(t, rows-1)], which shrinks at document edges.
inline WordTagSequence tag_words(const std::vector<Vec>& phrase_probs,
                                 std::size_t n, std::size_t window,
                                 const TagConfig& cfg = {}) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const std::size_t rows = phrase_probs.size();
  if (rows != phrase_row_count(n, window))
    throw DataError("tag_words: " + std::to_string(rows) +
                    " phrase rows for " + std::to_string(n) +
                    " tokens under window " + std::to_string(window));
  constexpr int kNoVote = -2;  // sub-threshold phrase under kDiscardVote

  WordTagSequence tags(n, kNoTag);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= window - 1 ? t - (window - 1) : 0;
    const std::size_t hi = std::min(t, rows - 1);
    if (cfg.strict_window && hi - lo + 1 != window) continue;
    int agreed = kNoTag;  // no vote seen yet
    bool blocked = false;
    for (std::size_t s = lo; s <= hi && !blocked; ++s) {
      const Vec& row = phrase_probs[s];
      int vote = kNoVote;
      double best = -1.0;
      for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c] > best) {
          best = row[c];
          vote = static_cast<int>(c);
        }
      if (best < cfg.threshold) {
        if (cfg.mode == ThresholdMode::kMaskClasses) continue;  // abstains
        blocked = true;
        break;
      }
      if (agreed == kNoTag) agreed = vote;
      else if (agreed != vote) blocked = true;
    }
    if (!blocked && agreed != kNoTag) tags[t] = agreed;
  }
  return tags;
}

// Maximal runs of identical tags; `last` is inclusive.
struct Segment {
  std::size_t start = 0;
  std::size_t last = 0;
  int category = kNoTag;
};

inline std::vector<Segment> segment(const WordTagSequence& tags) {
  std::vector<Segment> out;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] == kNoTag) continue;
    if (!out.empty() && out.back().category == tags[t] &&
        out.back().last + 1 == t) {
      out.back().last = t;
    } else {
      out.push_back({t, t, tags[t]});
    }
  }
  return out;
}

// --- lexicons ---------------------------------------------------------------

struct TagLexicon {
  std::array<std::map<std::string, std::size_t>, kNumCategories> counts;
};

// Counts each tagged token's surface form under its category. The reserved
// OOV index never enters a lexicon: its surface form is a placeholder, not
// a word of the corpus.
inline void add_to_lexicon(TagLexicon& lex, const Document& doc,
                           const WordTagSequence& tags,
                           const Vocabulary& vocab) {
  if (doc.tokens.size() != tags.size())
    throw std::invalid_argument("lexicon: tag count does not match tokens");
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] == kNoTag) continue;
    if (doc.tokens[t] == Vocabulary::kOov) continue;
    ++lex.counts[static_cast<std::size_t>(tags[t])]
          [vocab.word_at(doc.tokens[t])];
  }
}

// Top words by count, ties broken alphabetically.
inline std::vector<std::pair<std::string, std::size_t>> top_words(
    const TagLexicon& lex, std::size_t category, std::size_t k) {
  const auto& m = lex.counts.at(category);
  std::vector<std::pair<std::string, std::size_t>> out(m.begin(), m.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

struct IntersectionRow {
  std::size_t reference_size = 0;
  std::size_t lexicon_size = 0;
  std::size_t intersection_size = 0;
};

inline std::array<IntersectionRow, kNumCategories> score_lexicon(
    const TagLexicon& lex, const CategoryVocabulary& ref) {
  std::array<IntersectionRow, kNumCategories> out;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    out[c].reference_size = ref.words[c].size();
    out[c].lexicon_size = lex.counts[c].size();
    std::size_t inter = 0;
    for (const auto& [word, count] : lex.counts[c])
      if (ref.words[c].count(word)) ++inter;
    out[c].intersection_size = inter;
  }
  return out;
}

inline constexpr std::size_t kLexiconReportTop = 50;

inline void write_lexicon_report(std::ostream& out, const TagLexicon& lex,
                                 const CategoryVocabulary& ref,
                                 std::size_t top = kLexiconReportTop) {
  csv_write_row(out, {"category", "word", "count", "in_reference"});
  for (std::size_t c = 0; c < kNumCategories; ++c)
    for (const auto& [word, count] : top_words(lex, c, top))
      csv_write_row(out, {std::to_string(c), word, std::to_string(count),
                          ref.words[c].count(word) ? "1" : "0"});
}

inline void write_intersection_report(
    std::ostream& out,
    const std::array<IntersectionRow, kNumCategories>& rows) {
  csv_write_row(out,
                {"category", "reference_size", "lexicon_size",
                 "intersection_size"});
  for (std::size_t c = 0; c < kNumCategories; ++c)
    csv_write_row(out, {std::to_string(c),
                        std::to_string(rows[c].reference_size),
                        std::to_string(rows[c].lexicon_size),
                        std::to_string(rows[c].intersection_size)});
}

// --- rendering ----------------------------------------------------------------

namespace detail {

inline void check_segments(std::span<const std::string> tokens,
                           std::span<const Segment> segments) {
  std::size_t prev_end = 0;
  bool first = true;
  for (const Segment& s : segments) {
    if (s.category < 0 || s.category >= static_cast<int>(kNumCategories))
      throw DataError("segment category index " + std::to_string(s.category) +
                      " is out of range");
    if (s.last < s.start || s.last >= tokens.size())
      throw DataError("segment bounds do not fit the token sequence");
    if (!first && s.start <= prev_end)
      throw DataError("segments must be ordered and non-overlapping");
    prev_end = s.last;
    first = false;
  }
}

// 256-color codes, one per category, visually spread.
inline constexpr std::array<int, kNumCategories> kAnsi256 = {
    196, 208, 220, 118, 46,  49,  51,  39,  21,
    93,  129, 201, 213, 168, 131, 94,  244};

}  // namespace detail

// One line of text, tagged runs wrapped in 256-color escapes. Stripping
// the escapes must reproduce the space-joined tokens byte for byte.
inline std::string render_ansi(std::span<const std::string> tokens,
                               std::span<const Segment> segments) {
  detail::check_segments(tokens, segments);
  std::string out;
  std::size_t seg = 0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (t > 0) out += ' ';
    if (seg < segments.size() && segments[seg].start == t)
      out += "\x1b[38;5;" +
             std::to_string(
                 detail::kAnsi256[static_cast<std::size_t>(segments[seg].category)]) +
             "m";
    out += tokens[t];
    if (seg < segments.size() && segments[seg].last == t) {
      out += "\x1b[0m";
      ++seg;
    }
  }
  return out;
}

inline std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct RenderedNote {
  std::string title;
  std::vector<std::string> tokens;
  std::vector<Segment> segments;
};

// Standalone page: inline stylesheet, a legend block, one span per
// segment carrying class="cat-<i>".
inline std::string render_html(std::span<const RenderedNote> notes) {
  std::string out;
  out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  out += "<title>colored notes</title>\n<style>\n";
  out += "body { font-family: sans-serif; margin: 2em; }\n";
  out += ".note { line-height: 1.6; max-width: 60em; }\n";
  out += ".legend span { display: inline-block; margin: 0 0.4em 0.4em 0; "
         "padding: 0.1em 0.4em; border-radius: 3px; }\n";
  const auto& cats = category_table();
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    out += ".cat-" + std::to_string(c) + " { background: " +
           std::string(cats[c].color) + "; }\n";
  }
  out += "</style>\n</head>\n<body>\n<div class=\"legend\">\n";
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    out += "<span class=\"cat-" + std::to_string(c) + "\">" +
           html_escape(std::string(cats[c].title)) + " (" +
           std::to_string(cats[c].code_lo) + "-" +
           std::to_string(cats[c].code_hi) + ")</span>\n";
  }
  out += "</div>\n";
  for (const RenderedNote& note : notes) {
    detail::check_segments(note.tokens, note.segments);
    out += "<h3>" + html_escape(note.title) + "</h3>\n<p class=\"note\">";
    std::size_t seg = 0;
    for (std::size_t t = 0; t < note.tokens.size(); ++t) {
      if (t > 0) out += ' ';
      if (seg < note.segments.size() && note.segments[seg].start == t)
        out += "<span class=\"cat-" +
               std::to_string(note.segments[seg].category) + "\">";
      out += html_escape(note.tokens[t]);
      if (seg < note.segments.size() && note.segments[seg].last == t) {
        out += "</span>";
        ++seg;
      }
    }
    out += "</p>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

// Convenience: strip ANSI SGR escapes (used by tests and the plain format).
inline std::string strip_ansi(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '\x1b' && i + 1 < s.size() && s[i + 1] == '[') {
      std::size_t j = i + 2;
      while (j < s.size() && (ascii_digit(s[j]) || s[j] == ';')) ++j;
      if (j < s.size() && s[j] == 'm') {
        i = j + 1;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

}  // namespace msc
