// Fixed English stopword list. Embedded so the pipeline needs no data file;
// data/stopwords.txt mirrors it for reference and external tooling, and a
// test keeps the two in sync. A caller may load a custom list instead.
#pragma once

#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "msc/common.hpp"

namespace msc {

using StopwordSet = std::unordered_set<std::string>;

inline constexpr std::array<std::string_view, 174> kDefaultStopwords = {
    "a",       "about",   "above",   "after",   "again",   "against",
    "all",     "am",      "an",      "and",     "any",     "are",
    "arent",   "as",      "at",      "be",      "because", "been",
    "before",  "being",   "below",   "between", "both",    "but",
    "by",      "cannot",  "cant",    "could",   "couldnt", "did",
    "didnt",   "do",      "does",    "doesnt",  "doing",   "dont",
    "down",    "during",  "each",    "few",     "for",     "from",
    "further", "had",     "hadnt",   "has",     "hasnt",   "have",
    "havent",  "having",  "he",      "hed",     "hell",    "her",
    "here",    "heres",   "hers",    "herself", "hes",     "him",
    "himself", "his",     "how",     "hows",    "i",       "id",
    "if",      "ill",     "im",      "in",      "into",    "is",
    "isnt",    "it",      "its",     "itself",  "ive",     "lets",
    "me",      "more",    "most",    "mustnt",  "my",      "myself",
    "no",      "nor",     "not",     "of",      "off",     "on",
    "once",    "only",    "or",      "other",   "ought",   "our",
    "ours",    "ourselves", "out",   "over",    "own",     "same",
    "shant",   "she",     "shed",    "shell",   "shes",    "should",
    "shouldnt", "so",     "some",    "such",    "than",    "that",
    "thats",   "the",     "their",   "theirs",  "them",    "themselves",
    "then",    "there",   "theres",  "these",   "they",    "theyd",
    "theyll",  "theyre",  "theyve",  "this",    "those",   "through",
    "to",      "too",     "under",   "until",   "up",      "very",
    "was",     "wasnt",   "we",      "wed",     "well",    "were",
    "werent",  "weve",    "what",    "whats",   "when",    "whens",
    "where",   "wheres",  "which",   "while",   "who",     "whom",
    "whos",    "why",     "whys",    "with",    "wont",    "would",
    "wouldnt", "you",     "youd",    "youll",   "your",    "youre",
    "yours",   "yourself", "yourselves", "youve", "also",  "may",
};

inline StopwordSet default_stopwords() {
  StopwordSet set;
  set.reserve(kDefaultStopwords.size());
  for (auto w : kDefaultStopwords) set.emplace(w);
  return set;
}

// One word per line; blank lines and #-comments ignored.
inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim(line);
    if (w.empty() || w[0] == '#') continue;
    set.insert(w);
  }
  return set;
}

}  // namespace msc
