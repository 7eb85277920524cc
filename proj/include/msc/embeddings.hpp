// Word-vector table construction. Vectors can come from a text file in the
// usual "word v1 ... vd" layout (optionally preceded by a "count dim"
// header line) or be freshly initialised. Every vocabulary word missing
// from the file, including the reserved OOV row, gets a small random
// vector, and the whole table trains like any other parameter.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "msc/autodiff.hpp"
#include "msc/corpus.hpp"

namespace msc {

inline Tensor init_embeddings(const Vocabulary& vocab, std::size_t dim,
                              Rng& rng) {
  Tensor table("embeddings", {vocab.size(), dim});
  const double bound = 0.5 / static_cast<double>(dim);
  table.fill_uniform(rng, -bound, bound);
  return table;
}

// Loads vectors for the vocabulary from `path`. Lines whose word is not in
// the vocabulary are skipped. A malformed line (wrong component count, or a
// component that does not parse as a number) raises ParseError with its
// line number.
inline Tensor load_embeddings(const std::string& path,
                              const Vocabulary& vocab, std::size_t dim,
                              Rng& rng) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);

  Tensor table = init_embeddings(vocab, dim, rng);
  std::vector<bool> seen(vocab.size(), false);

  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;

    if (first) {
      first = false;
      // Header line: two integers, no vector components.
      std::string second, extra;
      std::istringstream probe(line);
      std::string a;
      probe >> a >> second;
      if (!(probe >> extra) && !second.empty() &&
          a.find_first_not_of("0123456789") == std::string::npos &&
          second.find_first_not_of("0123456789") == std::string::npos) {
        const auto file_dim = parse_long(second, line_no);
        if (static_cast<std::size_t>(file_dim) != dim)
          throw ParseError("embedding file declares dimension " + second +
                               ", expected " + std::to_string(dim),
                           line_no);
        continue;
      }
    }

    std::vector<double> components;
    components.reserve(dim);
    std::string tok;
    while (fields >> tok) components.push_back(parse_double(tok, line_no));
    if (components.size() != dim)
      throw ParseError("embedding line has " +
                           std::to_string(components.size()) +
                           " components, expected " + std::to_string(dim),
                       line_no);

    const std::uint32_t idx = vocab.index_of(word);
    if (idx == Vocabulary::kOov && word != vocab.word_at(Vocabulary::kOov))
      continue;  // word outside the vocabulary
    std::copy(components.begin(), components.end(),
              table.value.begin() + idx * dim);
    seen[idx] = true;
  }
  // An empty file is the documented fallback: every row keeps its seeded
  // random initialisation.
  return table;
}

}  // namespace msc
