// Note preprocessing: lowercase, strip punctuation, drop tokens containing
// digits, drop stopwords. Deterministic and order-preserving.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "msc/common.hpp"
#include "msc/stopwords.hpp"

namespace msc {

// Tokenization contract: punctuation characters are deleted in place (so
// "120/80" collapses to "12080" and is then dropped as a number), the text
// splits on whitespace, tokens containing any digit are removed whole, and
// surviving tokens are lowercase [a-z]+ filtered against the stopword set.
inline std::vector<std::string> preprocess(std::string_view body,
                                           const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  bool has_digit = false;
  auto flush = [&] {
    if (!current.empty()) {
      if (!has_digit && !stopwords.count(current))
        tokens.push_back(current);
      current.clear();
    }
    has_digit = false;
  };
  for (char raw : body) {
    unsigned char uc = static_cast<unsigned char>(raw);
    if (uc == ' ' || uc == '\t' || uc == '\n' || uc == '\r' || uc == '\f' ||
        uc == '\v') {
      flush();
    } else if (ascii_alpha(raw)) {
      current.push_back(ascii_lower(raw));
    } else if (ascii_digit(raw)) {
      current.push_back(raw);
      has_digit = true;
    }
    // anything else is punctuation: deleted, token continues
  }
  flush();
  return tokens;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace msc
