// 17-category diagnosis label tree: code-range table, fine-to-coarse
// roll-up, and per-category description vocabularies used by evaluation.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msc/common.hpp"
#include "msc/preprocess.hpp"

namespace msc {

inline constexpr int kNumCategories = 17;

struct Category {
  int index = 0;        // 0..16, stable key used everywhere downstream
  int code_lo = 0;      // inclusive integer code range
  int code_hi = 0;
  std::string title;
  std::string color;    // render color key (hex), arbitrary but fixed
};

// Index assignment is arbitrary but fixed; ranges partition 001-999.
inline const std::array<Category, kNumCategories>& category_table() {
  static const std::array<Category, kNumCategories> table = {{
      {0, 390, 459, "diseases of the circulatory system", "#e6194b"},
      {1, 240, 279,
       "endocrine nutritional and metabolic diseases and immunity disorders",
       "#3cb44b"},
      {2, 460, 519, "diseases of the respiratory system", "#c8a400"},
      {3, 800, 999, "injury and poisoning", "#4363d8"},
      {4, 580, 629, "diseases of the genitourinary system", "#f58231"},
      {5, 520, 579, "diseases of the digestive system", "#911eb4"},
      {6, 780, 799, "symptoms signs and ill defined conditions", "#2a9d9d"},
      {7, 280, 289, "diseases of the blood and blood forming organs",
       "#f032e6"},
      {8, 1, 139, "infectious and parasitic diseases", "#7a9e00"},
      {9, 320, 389, "diseases of the nervous system and sense organs",
       "#b05c6e"},
      {10, 290, 319, "mental disorders", "#008080"},
      {11, 760, 779, "certain conditions originating in the perinatal period",
       "#8a5fd1"},
      {12, 680, 709, "diseases of the skin and subcutaneous tissue",
       "#9a6324"},
      {13, 710, 739,
       "diseases of the musculoskeletal system and connective tissue",
       "#5b5ea6"},
      {14, 140, 239, "neoplasms", "#800000"},
      {15, 740, 759, "congenital anomalies", "#3f7d4e"},
      {16, 630, 679, "complications of pregnancy childbirth and the puerperium",
       "#808000"},
  }};
  return table;
}

using LabelVector = std::vector<std::uint8_t>;  // one bit per category

enum class UnknownCodePolicy { kStrict, kWarnSkip };

struct Taxonomy {
  std::vector<Category> categories;
  // Fine code text -> category index for every code seen in the loaded tree.
  std::map<std::string, int> fine_to_coarse;
  // Codes explicitly excluded from the label space (E/V prefixes).
  std::set<std::string> excluded;
  // Accumulated short+long descriptions per category.
  std::array<std::vector<std::string>, kNumCategories> descriptions;

  int num_categories() const { return static_cast<int>(categories.size()); }

  // Maps a fine code ("11.3", "401.9", "E812") to a category index by the
  // integer prefix of the code text, or -1 when the code is an excluded
  // E/V supplementary code.
  int category_of(std::string_view fine_code) const {
    std::string code = trim(fine_code);
    if (code.empty()) throw DataError("empty diagnosis code");
    char head = ascii_lower(code[0]);
    if (head == 'e' || head == 'v') return -1;
    std::size_t i = 0;
    int value = 0;
    while (i < code.size() && ascii_digit(code[i])) {
      value = value * 10 + (code[i] - '0');
      ++i;
    }
    if (i == 0 || (i < code.size() && code[i] != '.'))
      throw DataError("malformed diagnosis code: \"" + code + "\"");
    for (const auto& cat : categories)
      if (value >= cat.code_lo && value <= cat.code_hi) return cat.index;
    throw DataError("diagnosis code outside all category ranges: \"" + code +
                    "\"");
  }
};

// The built-in tree: 17 categories whose only description is their title.
inline Taxonomy default_taxonomy() {
  Taxonomy tax;
  const auto& table = category_table();
  tax.categories.assign(table.begin(), table.end());
  for (const auto& cat : table) tax.descriptions[cat.index].push_back(cat.title);
  return tax;
}

// Taxonomy tree file: one record per node, pipe-delimited
//   code|level|short description|long description|parent code
// Lines that are blank or start with '#' are skipped. E/V codes are
// recorded as excluded; every other code must fall inside a category range.
inline Taxonomy load_taxonomy(const std::string& tree_file) {
  std::ifstream in(tree_file);
  if (!in) throw DataError("cannot open taxonomy file: " + tree_file);
  Taxonomy tax;
  tax.categories.assign(category_table().begin(), category_table().end());

  std::string line;
  std::size_t lineno = 0;
  bool any_node = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string rec = trim(line);
    if (rec.empty() || rec[0] == '#') continue;
    auto fields = split(rec, '|');
    if (fields.size() != 5)
      throw ParseError("taxonomy record needs 5 |-separated fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    std::string code = trim(fields[0]);
    if (code.empty()) throw ParseError("taxonomy record has empty code", lineno);
    parse_long(trim(fields[1]), lineno);  // level: validated, not used
    std::string short_desc = trim(fields[2]);
    std::string long_desc = trim(fields[3]);

    char head = ascii_lower(code[0]);
    if (head == 'e' || head == 'v') {
      tax.excluded.insert(code);
      continue;
    }
    int idx;
    try {
      idx = tax.category_of(code);
    } catch (const DataError& e) {
      throw ParseError(e.what(), lineno);
    }
    any_node = true;
    tax.fine_to_coarse[code] = idx;
    if (!short_desc.empty()) tax.descriptions[idx].push_back(short_desc);
    if (!long_desc.empty()) tax.descriptions[idx].push_back(long_desc);
  }
  if (!any_node)
    throw DataError("taxonomy file has no usable records: " + tree_file);
  return tax;
}

// Multi-hot label vector: bit i set iff some fine code maps to category i.
// Excluded (E/V) codes are ignored; duplicates collapse.
inline LabelVector rollup_labels(
    const std::vector<std::string>& fine_codes, const Taxonomy& tax,
    UnknownCodePolicy policy = UnknownCodePolicy::kStrict,
    std::ostream* warn_stream = nullptr) {
  LabelVector labels(static_cast<std::size_t>(tax.num_categories()), 0);
  for (const auto& code : fine_codes) {
    int idx;
    try {
      idx = tax.category_of(code);
    } catch (const DataError&) {
      if (policy == UnknownCodePolicy::kStrict) throw;
      if (warn_stream) *warn_stream << "warning: skipping code \"" << code
                                    << "\"\n";
      continue;
    }
    if (idx >= 0) labels[static_cast<std::size_t>(idx)] = 1;
  }
  return labels;
}

// Per-category word sets from the accumulated descriptions, preprocessed
// exactly like documents. Evaluation-only reference vocabulary.
struct CategoryVocabulary {
  std::array<std::set<std::string>, kNumCategories> words;
};

inline CategoryVocabulary category_vocabulary(const Taxonomy& tax,
                                              const StopwordSet& stopwords) {
  CategoryVocabulary vocab;
  for (int i = 0; i < tax.num_categories(); ++i) {
    for (const auto& desc : tax.descriptions[static_cast<std::size_t>(i)]) {
      for (auto& tok : preprocess(desc, stopwords))
        vocab.words[static_cast<std::size_t>(i)].insert(std::move(tok));
    }
  }
  return vocab;
}

}  // namespace msc
