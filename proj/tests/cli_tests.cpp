// End-to-end checks of the command-line tool: exit codes, file formats,
// and byte-identical reruns. Each test works in its own temp directory.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "msc/msc.hpp"

#ifndef MSC_CLI_PATH
#error "MSC_CLI_PATH must point at the built executable"
#endif

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(MSC_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("msc_cli_" + std::to_string(msc::Rng(
                             static_cast<std::uint64_t>(
                                 std::chrono::steady_clock::now()
                                     .time_since_epoch()
                                     .count()))
                             .below(1u << 30)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) { return msc::read_file(path); }

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// A small corpus every pipeline test shares: 3 planted categories.
void make_corpus(const TempDir& dir, std::uint64_t seed = 11) {
  const int rc = run("synth --out " + dir.file("corpus.csv") + " --truth " +
                     dir.file("truth.csv") + " --pools " + dir.file("pools.csv") +
                     " --set docs=40 --set seed=" + std::to_string(seed) +
                     " --set categories=3 --set length_min=12 --set "
                     "length_max=25 >/dev/null 2>&1");
  REQUIRE(rc == 0);
}

}  // namespace

TEST_CASE("version and usage errors", "[cli]") {
  CHECK(run("--version >/dev/null 2>&1") == 0);
  CHECK(run(">/dev/null 2>&1") == 1);            // a subcommand is required
  CHECK(run("synth >/dev/null 2>&1") == 1);      // --out is required
  CHECK(run("frobnicate >/dev/null 2>&1") == 1); // unknown subcommand
}

TEST_CASE("missing and malformed inputs exit with the data code", "[cli]") {
  TempDir dir;
  CHECK(run("preprocess --in " + dir.file("absent.csv") + " --out-vocab " +
            dir.file("v.txt") + " --out-split " + dir.file("s.csv") +
            " >/dev/null 2>&1") == 2);

  std::ofstream(dir.file("bad.csv")) << "not,a,corpus\nheader,at,all\n";
  CHECK(run("preprocess --in " + dir.file("bad.csv") + " --out-vocab " +
            dir.file("v.txt") + " --out-split " + dir.file("s.csv") +
            " >/dev/null 2>&1") == 2);

  CHECK(run("synth --out " + dir.file("c.csv") +
            " --set docs=nonsense >/dev/null 2>&1") == 2);
  CHECK(run("synth --out " + dir.file("c.csv") +
            " --set length_min=0 >/dev/null 2>&1") == 2);
}

TEST_CASE("synthetic corpora are seed-deterministic", "[cli]") {
  TempDir a, b, c;
  make_corpus(a, 11);
  make_corpus(b, 11);
  make_corpus(c, 12);
  CHECK(slurp(a.file("corpus.csv")) == slurp(b.file("corpus.csv")));
  CHECK(slurp(a.file("truth.csv")) == slurp(b.file("truth.csv")));
  CHECK(slurp(a.file("pools.csv")) == slurp(b.file("pools.csv")));
  CHECK(slurp(a.file("corpus.csv")) != slurp(c.file("corpus.csv")));
}

TEST_CASE("the full pipeline runs and emits well-formed files", "[cli]") {
  TempDir dir;
  make_corpus(dir);

  // preprocess
  REQUIRE(run("preprocess --in " + dir.file("corpus.csv") + " --out-vocab " +
              dir.file("vocab.txt") + " --out-split " + dir.file("split.csv") +
              " --seed 5 >/dev/null 2>&1") == 0);
  {
    std::ifstream in(dir.file("vocab.txt"));
    const msc::Vocabulary vocab = msc::read_vocabulary(in);  // checks sorted
    CHECK(vocab.word_count() > 0);
  }
  CHECK(first_line(slurp(dir.file("split.csv"))) == "note_id,subset");

  // balance
  REQUIRE(run("balance --in " + dir.file("corpus.csv") + " --split " +
              dir.file("split.csv") + " --vocab " + dir.file("vocab.txt") +
              " --out-manifest " + dir.file("repl.csv") + " --out-report " +
              dir.file("freq.csv") + " >/dev/null 2>&1") == 0);
  CHECK(first_line(slurp(dir.file("repl.csv"))) == "note_id,count");
  CHECK(first_line(slurp(dir.file("freq.csv"))) == "category,before,after");

  // train (tiny model, two epochs: plumbing, not accuracy)
  const std::string train_cmd =
      "train --in " + dir.file("corpus.csv") + " --split " +
      dir.file("split.csv") + " --vocab " + dir.file("vocab.txt") +
      " --replication " + dir.file("repl.csv") +
      " --embed-dim 6 --word-hidden 3 --phrase-hidden 2 --window 3"
      " --batch-size 4 --batches-per-epoch 2 --epochs 2 --seed 7"
      " --init-seed 9 --out-report " + dir.file("train.csv") +
      " --out-model ";
  REQUIRE(run(train_cmd + dir.file("model.bin") + " >/dev/null 2>&1") == 0);
  CHECK(first_line(slurp(dir.file("train.csv"))) ==
        "epoch,train_loss,val_precision,val_recall,val_f1");

  // eval
  REQUIRE(run("eval --model " + dir.file("model.bin") + " --in " +
              dir.file("corpus.csv") + " --split " + dir.file("split.csv") +
              " --subset test --out " + dir.file("scores.csv") + " > " +
              dir.file("eval.txt") + " 2>/dev/null") == 0);
  const std::string eval_out = slurp(dir.file("eval.txt"));
  CHECK(eval_out.find("precision ") != std::string::npos);
  CHECK(eval_out.find("recall ") != std::string::npos);
  CHECK(eval_out.find("f1 ") != std::string::npos);
  const std::string scores_header = first_line(slurp(dir.file("scores.csv")));
  CHECK(scores_header.find("note_id,cat0,") == 0);
  CHECK(scores_header.find("cat16") != std::string::npos);

  // color: whole corpus to HTML, single note to ANSI
  REQUIRE(run("color --model " + dir.file("model.bin") + " --in " +
              dir.file("corpus.csv") + " --format html --out " +
              dir.file("page.html") + " >/dev/null 2>&1") == 0);
  const std::string html = slurp(dir.file("page.html"));
  CHECK(html.find("<!DOCTYPE html>") == 0);
  CHECK(html.find("</html>") != std::string::npos);
  CHECK(html.find("class=\"legend\"") != std::string::npos);

  std::ofstream(dir.file("note.txt"))
      << "Fever and cough with acute chest pain this morning.\n";
  REQUIRE(run("color --model " + dir.file("model.bin") + " --in " +
              dir.file("note.txt") + " --format ansi --out " +
              dir.file("note.ansi") + " >/dev/null 2>&1") == 0);
  const std::string ansi = slurp(dir.file("note.ansi"));
  CHECK(!ansi.empty());
  CHECK(msc::strip_ansi(ansi).find("fever") == 0);

  // tag: lexicons, intersections, token metrics against the planted truth
  REQUIRE(run("tag --model " + dir.file("model.bin") + " --in " +
              dir.file("corpus.csv") + " --split " + dir.file("split.csv") +
              " --subset train --truth " + dir.file("truth.csv") +
              " --reference " + dir.file("pools.csv") + " --out-lexicon " +
              dir.file("lex.csv") + " --out-intersections " +
              dir.file("inter.csv") + " > " + dir.file("tag.txt") +
              " 2>/dev/null") == 0);
  CHECK(first_line(slurp(dir.file("lex.csv"))) ==
        "category,word,count,in_reference");
  CHECK(first_line(slurp(dir.file("inter.csv"))) ==
        "category,reference_size,lexicon_size,intersection_size");
  CHECK(slurp(dir.file("tag.txt")).find("token_f1 ") != std::string::npos);
}

TEST_CASE("identical seeds reproduce every artifact byte for byte", "[cli]") {
  TempDir dir;
  make_corpus(dir);
  REQUIRE(run("preprocess --in " + dir.file("corpus.csv") + " --out-vocab " +
              dir.file("vocab.txt") + " --out-split " + dir.file("split.csv") +
              " --seed 5 >/dev/null 2>&1") == 0);

  const std::string common =
      "train --in " + dir.file("corpus.csv") + " --split " +
      dir.file("split.csv") + " --vocab " + dir.file("vocab.txt") +
      " --embed-dim 6 --word-hidden 3 --phrase-hidden 2 --window 3"
      " --batch-size 4 --batches-per-epoch 2 --epochs 2 --seed 7";
  REQUIRE(run(common + " --init-seed 9 --out-model " + dir.file("model_a.bin") +
              " --out-report " + dir.file("report_a.csv") +
              " >/dev/null 2>&1") == 0);
  REQUIRE(run(common + " --init-seed 9 --out-model " + dir.file("model_b.bin") +
              " --out-report " + dir.file("report_b.csv") +
              " >/dev/null 2>&1") == 0);
  CHECK(slurp(dir.file("model_a.bin")) == slurp(dir.file("model_b.bin")));
  CHECK(slurp(dir.file("report_a.csv")) == slurp(dir.file("report_b.csv")));

  for (const char* tag : {"a", "b"}) {
    REQUIRE(run("eval --model " + dir.file("model_a.bin") + " --in " +
                dir.file("corpus.csv") + " --split " + dir.file("split.csv") +
                " --subset test --out " + dir.file(std::string("scores_") +
                tag + ".csv") + " >/dev/null 2>&1") == 0);
    REQUIRE(run("color --model " + dir.file("model_a.bin") + " --in " +
                dir.file("corpus.csv") + " --format html --out " +
                dir.file(std::string("page_") + tag + ".html") +
                " >/dev/null 2>&1") == 0);
  }
  CHECK(slurp(dir.file("scores_a.csv")) == slurp(dir.file("scores_b.csv")));
  CHECK(slurp(dir.file("page_a.html")) == slurp(dir.file("page_b.html")));

  // A different initialization seed must not reproduce the checkpoint.
  REQUIRE(run(common + " --init-seed 10 --out-model " +
              dir.file("model_c.bin") + " >/dev/null 2>&1") == 0);
  CHECK(slurp(dir.file("model_a.bin")) != slurp(dir.file("model_c.bin")));
}

TEST_CASE("subcommands validate their enumerated flags", "[cli]") {
  TempDir dir;
  make_corpus(dir);
  REQUIRE(run("preprocess --in " + dir.file("corpus.csv") + " --out-vocab " +
              dir.file("vocab.txt") + " --out-split " + dir.file("split.csv") +
              " >/dev/null 2>&1") == 0);
  REQUIRE(run("train --in " + dir.file("corpus.csv") + " --split " +
              dir.file("split.csv") + " --vocab " + dir.file("vocab.txt") +
              " --embed-dim 4 --word-hidden 2 --phrase-hidden 2 --window 3"
              " --batch-size 2 --batches-per-epoch 1 --epochs 1"
              " --out-model " + dir.file("model.bin") +
              " >/dev/null 2>&1") == 0);

  CHECK(run("eval --model " + dir.file("model.bin") + " --in " +
            dir.file("corpus.csv") + " --split " + dir.file("split.csv") +
            " --subset holdout >/dev/null 2>&1") == 2);
  CHECK(run("color --model " + dir.file("model.bin") + " --in " +
            dir.file("corpus.csv") + " --format rtf >/dev/null 2>&1") == 2);
  CHECK(run("eval --model " + dir.file("corpus.csv") + " --in " +
            dir.file("corpus.csv") + " >/dev/null 2>&1") == 2);

  // A replication manifest that misses a training note is a data error.
  std::ofstream(dir.file("short.csv")) << "note_id,count\nnote-0,1\n";
  CHECK(run("train --in " + dir.file("corpus.csv") + " --split " +
            dir.file("split.csv") + " --vocab " + dir.file("vocab.txt") +
            " --replication " + dir.file("short.csv") +
            " --embed-dim 4 --word-hidden 2 --phrase-hidden 2 --window 3"
            " --batch-size 2 --batches-per-epoch 1 --epochs 1 --out-model " +
            dir.file("m.bin") + " >/dev/null 2>&1") == 2);
}
