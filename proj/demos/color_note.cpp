// Colorer walkthrough without a trained model: build a phrase-probability
// matrix by hand, derive word tags and segments, and render both formats.
#include <cstdio>
#include <string>
#include <vector>

#include "msc/msc.hpp"

using namespace msc;

int main() {
  const std::vector<std::string> tokens = {
      "patient", "reports", "chest",  "pain",    "radiating", "left",
      "arm",     "history", "asthma", "inhaler", "prescribed"};
  const std::size_t n = tokens.size();
  const std::size_t window = 5;
  const std::size_t rows = phrase_row_count(n, window);

  // Phrases over the first half vote circulatory (category 0), over the
  // second half respiratory (category 2); the middle is left uncertain.
  std::vector<std::vector<double>> phrase_probs(
      rows, std::vector<double>(kNumCategories, 0.05));
  for (std::size_t s = 0; s < rows; ++s) {
    if (s <= 1) phrase_probs[s][0] = 0.92;
    else if (s >= rows - 2) phrase_probs[s][2] = 0.88;
    else phrase_probs[s][0] = 0.40;  // below threshold: blocks agreement
  }

  WordTagSequence tags = tag_words(phrase_probs, n, window, TagConfig{});
  std::vector<Segment> segments = segment(tags);
  for (const Segment& s : segments)
    std::printf(
        "segment [%zu,%zu] -> %s\n", s.start, s.last,
        category_table()[static_cast<std::size_t>(s.category)].title.c_str());

  std::puts(render_ansi(tokens, segments).c_str());

  const std::vector<RenderedNote> notes = {{"demo note", tokens, segments}};
  const std::string html = render_html(notes);
  std::printf("html: %zu bytes (write it to a file to view)\n", html.size());
  return 0;
}
