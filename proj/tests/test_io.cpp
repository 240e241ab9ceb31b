#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sphrase/embedding_io.hpp"
#include "sphrase/errors.hpp"
#include "sphrase/manifest.hpp"
#include "sphrase/version.hpp"

using namespace sphrase;

namespace {

EmbeddingModel tiny_model() {
  EmbeddingModel model;
  model.vocab_size = 2;
  model.dim = 2;
  model.input = {1.0f, 0.0f, 0.0f, 1.0f};
  model.output = {0.0f, 0.0f, 0.0f, 0.0f};
  model.bias = {0.0f, 0.0f};
  return model;
}

Vocabulary tiny_vocab() {
  return Vocabulary::from_counts({{"alpha", 5}, {"beta", 2}}, 1);
}

}  // namespace

TEST_CASE("save_embedding writes header plus one line per word") {
  std::ostringstream out;
  save_embedding(tiny_model(), tiny_vocab(), out);
  CHECK(out.str() ==
        "2 2\n"
        "alpha 1 0\n"
        "beta 0 1\n");
}

TEST_CASE("embedding text round-trips") {
  auto model = init_model<float>(7, 5, 99);
  const Vocabulary vocab = Vocabulary::from_counts(
      {{"a", 9}, {"b", 8}, {"c", 7}, {"d", 6}, {"e", 5}, {"f", 4}, {"g", 3}},
      1);
  std::ostringstream out;
  save_embedding(model, vocab, out);
  std::istringstream in(out.str());
  const WordVectors loaded = load_embedding(in);
  REQUIRE(loaded.size() == 7);
  REQUIRE(loaded.dim == 5);
  for (std::size_t i = 0; i < model.input.size(); ++i) {
    // %.9g makes the round-trip exact for binary32
    CHECK(loaded.vectors[i] == model.input[i]);
  }
  CHECK(loaded.id_of("d") == vocab.id_of("d"));
}

TEST_CASE("every saved line has dim + 1 fields") {
  auto model = init_model<float>(20, 7, 5);
  std::unordered_map<std::string, std::uint64_t> counts;
  for (int i = 0; i < 20; ++i) counts["tok" + std::to_string(i)] = 20 - i;
  const Vocabulary vocab = Vocabulary::from_counts(counts, 1);
  std::ostringstream out;
  save_embedding(model, vocab, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string field;
    std::size_t n = 0;
    while (fields >> field) ++n;
    CHECK(n == 8);
  }
}

TEST_CASE("load_embedding reports the offending line") {
  std::istringstream missing_row("2 2\nalpha 1 0\n");
  try {
    load_embedding(missing_row);
    FAIL("expected MalformedEmbeddingFile");
  } catch (const MalformedEmbeddingFile& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  std::istringstream bad_header("two 2\n");
  CHECK_THROWS_AS(load_embedding(bad_header), MalformedEmbeddingFile);

  std::istringstream bad_value("1 2\nalpha 1 x\n");
  CHECK_THROWS_AS(load_embedding(bad_value), MalformedEmbeddingFile);

  std::istringstream extra("1 2\nalpha 1 2 3\n");
  CHECK_THROWS_AS(load_embedding(extra), MalformedEmbeddingFile);

  std::istringstream dup("2 1\nsame 1\nsame 2\n");
  CHECK_THROWS_AS(load_embedding(dup), MalformedEmbeddingFile);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_embedding(empty), MalformedEmbeddingFile);
}

TEST_CASE("windows line endings parse identically") {
  std::istringstream unix_file("2 2\nalpha 0.5 -1\nbeta 2 3\n");
  std::istringstream dos_file("2 2\r\nalpha 0.5 -1\r\nbeta 2 3\r\n");
  const WordVectors a = load_embedding(unix_file);
  const WordVectors b = load_embedding(dos_file);
  CHECK(a.tokens == b.tokens);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("make_word_vectors mirrors the input matrix") {
  const EmbeddingModel model = tiny_model();
  const WordVectors wv = make_word_vectors(model, tiny_vocab());
  CHECK(wv.dim == 2);
  CHECK(wv.vectors == model.input);
  CHECK(wv.tokens == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("checkpoint files reject foreign content") {
  const auto dir = std::filesystem::temp_directory_path() / "sphrase_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "bad.bin").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a checkpoint at all";
  }
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest JSON round-trips every field") {
  RunManifest m;
  m.version = kVersion;
  m.command = "train";
  m.corpus_path = "corpus.txt";
  m.vocab_path = "vocab.tsv";
  m.output_path = "vectors.txt";
  m.min_count = 42;
  m.max_phrase_len = 8;
  m.config.regime = Regime::kSPhraseNU;
  m.config.window = 3;
  m.config.dim = 123;
  m.config.epochs = 4;
  m.config.initial_lr = 0.005;
  m.config.decay = 0.8;
  m.config.batch_tokens = 777;
  m.config.num_sampled = 55;
  m.config.seed = 987654321;
  m.config.threads = 3;
  m.config.deterministic = true;
  m.config.checkpoint_dir = "ckpts";

  const RunManifest back = RunManifest::from_json(m.to_json());
  CHECK(back.command == m.command);
  CHECK(back.corpus_path == m.corpus_path);
  CHECK(back.vocab_path == m.vocab_path);
  CHECK(back.output_path == m.output_path);
  CHECK(back.min_count == m.min_count);
  CHECK(back.max_phrase_len == m.max_phrase_len);
  CHECK(back.config.regime == m.config.regime);
  CHECK(back.config.window == m.config.window);
  CHECK(back.config.dim == m.config.dim);
  CHECK(back.config.epochs == m.config.epochs);
  CHECK(back.config.initial_lr == m.config.initial_lr);
  CHECK(back.config.decay == m.config.decay);
  CHECK(back.config.batch_tokens == m.config.batch_tokens);
  CHECK(back.config.num_sampled == m.config.num_sampled);
  CHECK(back.config.seed == m.config.seed);
  CHECK(back.config.threads == m.config.threads);
  CHECK(back.config.deterministic == m.config.deterministic);
  CHECK(back.config.checkpoint_dir == m.config.checkpoint_dir);
}

TEST_CASE("manifest parsing rejects garbage") {
  CHECK_THROWS_AS(RunManifest::from_json("not json"), InvalidConfig);
  CHECK_THROWS_AS(RunManifest::from_json("{}"), InvalidConfig);
  CHECK_THROWS_AS(RunManifest::from_json(
                      R"({"config":{"regime":"bogus","window":1,"dim":1,)"
                      R"("epochs":1,"initial_lr":0.1,"decay":0.9,)"
                      R"("batch_tokens":1,"num_sampled":1,"seed":1}})"),
                  InvalidConfig);
}
