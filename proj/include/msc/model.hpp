// The full segment-coloring model:
//   word module:   embeddings -> bidirectional GRU -> affine -> sigmoid = Cw
//   phrase module: sliding window over Cw rows -> bidirectional GRU
//                  -> affine -> sigmoid = Cp
//   document head: per-class median over Cp rows = Cd
// Documents shorter than the window repeat their final Cw row so exactly
// one phrase row exists; token-level outputs keep the true length.
#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "msc/corpus.hpp"
#include "msc/embeddings.hpp"
#include "msc/nn.hpp"
#include "msc/taxonomy.hpp"

namespace msc {

struct ModelConfig {
  std::size_t embed_dim = 200;
  std::size_t word_hidden = 20;    // per direction
  std::size_t phrase_hidden = 10;  // per direction
  std::size_t window = 5;
  std::size_t classes = kNumCategories;
};

struct MscModel {
  ModelConfig cfg;
  Vocabulary vocab;
  Tensor embeddings;
  GruParams word_fwd, word_bwd;
  Tensor word_out_w, word_out_b;
  GruParams phrase_fwd, phrase_bwd;
  Tensor phrase_out_w, phrase_out_b;

  std::vector<Tensor*> tensors() {
    std::vector<Tensor*> out{&embeddings};
    for (Tensor* t : word_fwd.tensors()) out.push_back(t);
    for (Tensor* t : word_bwd.tensors()) out.push_back(t);
    out.push_back(&word_out_w);
    out.push_back(&word_out_b);
    for (Tensor* t : phrase_fwd.tensors()) out.push_back(t);
    for (Tensor* t : phrase_bwd.tensors()) out.push_back(t);
    out.push_back(&phrase_out_w);
    out.push_back(&phrase_out_b);
    return out;
  }
};

inline MscModel make_model(Vocabulary vocab, const ModelConfig& cfg,
                           Rng& rng) {
  if (cfg.window < 1) throw std::invalid_argument("window must be >= 1");
  MscModel m;
  m.cfg = cfg;
  m.vocab = std::move(vocab);
  m.embeddings = init_embeddings(m.vocab, cfg.embed_dim, rng);
  m.word_fwd = GruParams("word_fwd", cfg.embed_dim, cfg.word_hidden);
  m.word_bwd = GruParams("word_bwd", cfg.embed_dim, cfg.word_hidden);
  const std::size_t word_state = 2 * cfg.word_hidden;
  m.word_out_w = Tensor("word_out.w", {cfg.classes, word_state});
  m.word_out_b = Tensor("word_out.b", {cfg.classes});
  const std::size_t phrase_in = cfg.window * cfg.classes;
  m.phrase_fwd = GruParams("phrase_fwd", phrase_in, cfg.phrase_hidden);
  m.phrase_bwd = GruParams("phrase_bwd", phrase_in, cfg.phrase_hidden);
  const std::size_t phrase_state = 2 * cfg.phrase_hidden;
  m.phrase_out_w = Tensor("phrase_out.w", {cfg.classes, phrase_state});
  m.phrase_out_b = Tensor("phrase_out.b", {cfg.classes});

  m.word_fwd.init(rng);
  m.word_bwd.init(rng);
  m.phrase_fwd.init(rng);
  m.phrase_bwd.init(rng);
  auto affine_init = [&rng](Tensor& w, Tensor& b) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    w.fill_uniform(rng, -bound, bound);
    b.fill_uniform(rng, -bound, bound);
  };
  affine_init(m.word_out_w, m.word_out_b);
  affine_init(m.phrase_out_w, m.phrase_out_b);
  return m;
}

// Number of phrase rows for a document of n tokens under window W.
inline std::size_t phrase_row_count(std::size_t n, std::size_t window) {
  return n >= window ? n - window + 1 : 1;
}

// --- value-form forward -------------------------------------------------

struct ModelOutputs {
  std::vector<Vec> word_probs;    // n × classes
  std::vector<Vec> phrase_probs;  // phrase_row_count(n) × classes
  Vec doc_scores;                 // classes
};

inline std::vector<Vec> word_probs_values(const MscModel& m,
                                          std::span<const std::uint32_t> tokens) {
  if (tokens.empty()) throw DataError("cannot run the model on an empty document");
  const std::size_t n = tokens.size();
  const std::size_t d = m.cfg.embed_dim;
  std::vector<Vec> steps(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (tokens[t] >= m.vocab.size())
      throw DataError("token index " + std::to_string(tokens[t]) +
                      " outside the vocabulary");
    const double* row = m.embeddings.value.data() + tokens[t] * d;
    steps[t].assign(row, row + d);
  }
  std::vector<Vec> states =
      gru_bidirectional_values(m.word_fwd, m.word_bwd, steps);
  std::vector<Vec> probs(n, Vec(m.cfg.classes));
  for (std::size_t t = 0; t < n; ++t) {
    affine_into(m.word_out_w, m.word_out_b, states[t], probs[t]);
    for (double& v : probs[t]) v = sigmoid(v);
  }
  return probs;
}

// Window-concatenated phrase inputs; a short document repeats its final row.
inline std::vector<Vec> unfold_rows(const std::vector<Vec>& rows,
                                    std::size_t window) {
  if (rows.empty()) throw DataError("cannot unfold zero rows");
  const std::size_t n = rows.size();
  const std::size_t count = phrase_row_count(n, window);
  std::vector<Vec> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vec& dst = out[s];
    dst.reserve(window * rows[0].size());
    for (std::size_t k = 0; k < window; ++k) {
      const Vec& src = rows[std::min(s + k, n - 1)];
      dst.insert(dst.end(), src.begin(), src.end());
    }
  }
  return out;
}

inline std::vector<Vec> phrase_probs_values(const MscModel& m,
                                            const std::vector<Vec>& word_probs) {
  std::vector<Vec> inputs = unfold_rows(word_probs, m.cfg.window);
  std::vector<Vec> states =
      gru_bidirectional_values(m.phrase_fwd, m.phrase_bwd, inputs);
  std::vector<Vec> probs(states.size(), Vec(m.cfg.classes));
  for (std::size_t s = 0; s < states.size(); ++s) {
    affine_into(m.phrase_out_w, m.phrase_out_b, states[s], probs[s]);
    for (double& v : probs[s]) v = sigmoid(v);
  }
  return probs;
}

// Per-class median over phrase rows; an even row count takes the mean of
// the two middle order statistics.
inline Vec median_scores(const std::vector<Vec>& phrase_probs) {
  if (phrase_probs.empty()) throw DataError("median of zero phrase rows");
  const std::size_t classes = phrase_probs[0].size();
  const std::size_t m = phrase_probs.size();
  Vec out(classes);
  Vec column(m);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < m; ++i) column[i] = phrase_probs[i][c];
    std::sort(column.begin(), column.end());
    out[c] = 0.5 * (column[(m - 1) / 2] + column[m / 2]);
  }
  return out;
}

inline ModelOutputs forward_values(const MscModel& m,
                                   std::span<const std::uint32_t> tokens) {
  ModelOutputs out;
  out.word_probs = word_probs_values(m, tokens);
  out.phrase_probs = phrase_probs_values(m, out.word_probs);
  out.doc_scores = median_scores(out.phrase_probs);
  return out;
}

// --- tape-form forward ----------------------------------------------------

struct TapeOutputs {
  std::vector<ad::Var> word_probs;
  std::vector<ad::Var> phrase_probs;
  ad::Var doc_scores = -1;
};

inline TapeOutputs build_forward(MscModel& m, ad::Tape& tape,
                                 std::span<const std::uint32_t> tokens) {
  if (tokens.empty()) throw DataError("cannot run the model on an empty document");
  const std::size_t n = tokens.size();
  std::vector<ad::Var> steps(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (tokens[t] >= m.vocab.size())
      throw DataError("token index " + std::to_string(tokens[t]) +
                      " outside the vocabulary");
    steps[t] = tape.embed_row(m.embeddings, tokens[t]);
  }
  TapeOutputs out;
  std::vector<ad::Var> word_states =
      gru_bidirectional(tape, m.word_fwd, m.word_bwd, steps);
  out.word_probs.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    out.word_probs[t] =
        tape.sigmoid(tape.affine(m.word_out_w, word_states[t], m.word_out_b));

  const std::size_t count = phrase_row_count(n, m.cfg.window);
  std::vector<ad::Var> inputs(count);
  std::vector<ad::Var> parts(m.cfg.window);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t k = 0; k < m.cfg.window; ++k)
      parts[k] = out.word_probs[std::min(s + k, n - 1)];
    inputs[s] = tape.concat(parts);
  }
  std::vector<ad::Var> phrase_states =
      gru_bidirectional(tape, m.phrase_fwd, m.phrase_bwd, inputs);
  out.phrase_probs.resize(count);
  for (std::size_t s = 0; s < count; ++s)
    out.phrase_probs[s] = tape.sigmoid(
        tape.affine(m.phrase_out_w, phrase_states[s], m.phrase_out_b));
  out.doc_scores = tape.median_cols(out.phrase_probs);
  return out;
}

// Scalar training loss for one document.
inline ad::Var build_loss(MscModel& m, ad::Tape& tape,
                          std::span<const std::uint32_t> tokens,
                          const LabelVector& labels) {
  if (labels.size() != m.cfg.classes)
    throw DataError("label vector has " + std::to_string(labels.size()) +
                    " entries, expected " + std::to_string(m.cfg.classes));
  TapeOutputs out = build_forward(m, tape, tokens);
  Vec targets(labels.begin(), labels.end());
  return tape.bce(out.doc_scores, targets);
}

// --- checkpoint -------------------------------------------------------------

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}
inline void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}
inline void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}
inline void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw DataError("truncated checkpoint");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}
inline std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw DataError("truncated checkpoint");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
inline double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_u64(in));
}
inline std::string get_str(std::istream& in) {
  const std::uint32_t len = get_u32(in);
  if (len > (1u << 24)) throw DataError("corrupt checkpoint string length");
  std::string s(len, '\0');
  if (len && !in.read(s.data(), len)) throw DataError("truncated checkpoint");
  return s;
}

}  // namespace detail

inline constexpr char kCheckpointMagic[4] = {'M', 'S', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const MscModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);
  out.write(kCheckpointMagic, 4);
  detail::put_u32(out, kCheckpointVersion);

  detail::put_u64(out, model.vocab.hash());
  const auto& words = model.vocab.words();
  detail::put_u64(out, words.size());
  for (const auto& w : words) detail::put_str(out, w);

  const auto& cats = category_table();
  detail::put_u32(out, static_cast<std::uint32_t>(cats.size()));
  for (const auto& c : cats) {
    detail::put_u32(out, static_cast<std::uint32_t>(c.code_lo));
    detail::put_u32(out, static_cast<std::uint32_t>(c.code_hi));
    detail::put_str(out, std::string(c.title));
    detail::put_str(out, std::string(c.color));
  }

  detail::put_u64(out, model.cfg.embed_dim);
  detail::put_u64(out, model.cfg.word_hidden);
  detail::put_u64(out, model.cfg.phrase_hidden);
  detail::put_u64(out, model.cfg.window);
  detail::put_u64(out, model.cfg.classes);

  auto tensors = const_cast<MscModel&>(model).tensors();
  detail::put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const Tensor* t : tensors) {
    detail::put_str(out, t->name);
    detail::put_u32(out, static_cast<std::uint32_t>(t->shape.size()));
    for (auto d : t->shape) detail::put_u64(out, d);
    for (double v : t->value) detail::put_f64(out, v);
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

inline MscModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kCheckpointMagic))
    throw DataError("not a model checkpoint: " + path);
  const std::uint32_t version = detail::get_u32(in);
  if (version != kCheckpointVersion)
    throw DataError("unsupported checkpoint version " +
                    std::to_string(version));

  const std::uint64_t stored_hash = detail::get_u64(in);
  const std::uint64_t word_count = detail::get_u64(in);
  std::vector<std::string> words;
  words.reserve(word_count);
  for (std::uint64_t i = 0; i < word_count; ++i)
    words.push_back(detail::get_str(in));
  Vocabulary vocab(std::move(words));
  if (vocab.hash() != stored_hash)
    throw DataError("checkpoint vocabulary hash mismatch");

  const std::uint32_t cat_count = detail::get_u32(in);
  const auto& cats = category_table();
  if (cat_count != cats.size())
    throw DataError("checkpoint category table size mismatch");
  for (const auto& c : cats) {
    const auto lo = detail::get_u32(in);
    const auto hi = detail::get_u32(in);
    const auto title = detail::get_str(in);
    const auto color = detail::get_str(in);
    if (lo != static_cast<std::uint32_t>(c.code_lo) ||
        hi != static_cast<std::uint32_t>(c.code_hi) || title != c.title ||
        color != c.color)
      throw DataError("checkpoint category table does not match this build");
  }

  ModelConfig cfg;
  cfg.embed_dim = detail::get_u64(in);
  cfg.word_hidden = detail::get_u64(in);
  cfg.phrase_hidden = detail::get_u64(in);
  cfg.window = detail::get_u64(in);
  cfg.classes = detail::get_u64(in);
  if (cfg.classes != kNumCategories)
    throw DataError("checkpoint class count mismatch");

  Rng rng(0);  // values are overwritten below
  MscModel model = make_model(std::move(vocab), cfg, rng);
  auto tensors = model.tensors();
  const std::uint32_t tensor_count = detail::get_u32(in);
  if (tensor_count != tensors.size())
    throw DataError("checkpoint holds " + std::to_string(tensor_count) +
                    " tensors, expected " + std::to_string(tensors.size()));
  for (Tensor* t : tensors) {
    const std::string name = detail::get_str(in);
    if (name != t->name)
      throw DataError("checkpoint tensor order mismatch: expected " +
                      t->name + ", found " + name);
    const std::uint32_t ndim = detail::get_u32(in);
    std::vector<std::size_t> shape(ndim);
    for (auto& d : shape) d = detail::get_u64(in);
    if (shape != t->shape)
      throw DataError("checkpoint tensor " + name + " has unexpected shape");
    for (double& v : t->value) v = detail::get_f64(in);
    t->check_finite();
  }
  return model;
}

}  // namespace msc
