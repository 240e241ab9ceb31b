#include "sphrase/embedding_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphrase/errors.hpp"

namespace sphrase {

void WordVectors::rebuild_index() {
  index.clear();
  index.reserve(tokens.size());
  for (WordId id = 0; id < tokens.size(); ++id) {
    index.emplace(tokens[id], id);
  }
}

WordVectors make_word_vectors(const EmbeddingModel& model,
                              const Vocabulary& vocab) {
  WordVectors out;
  out.dim = model.dim;
  out.vectors = model.input;
  out.tokens.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    out.tokens.push_back(vocab.token_of(id));
  }
  out.rebuild_index();
  return out;
}

namespace {

void write_rows(std::ostream& out, const std::vector<std::string>& tokens,
                const std::vector<float>& vectors, std::size_t dim) {
  out << tokens.size() << ' ' << dim << '\n';
  char buffer[48];
  for (std::size_t id = 0; id < tokens.size(); ++id) {
    out << tokens[id];
    for (std::size_t i = 0; i < dim; ++i) {
      // %.9g round-trips binary32 exactly.
      std::snprintf(buffer, sizeof(buffer), " %.9g",
                    static_cast<double>(vectors[id * dim + i]));
      out << buffer;
    }
    out << '\n';
  }
}

}  // namespace

void save_embedding(const EmbeddingModel& model, const Vocabulary& vocab,
                    std::ostream& out) {
  std::vector<std::string> tokens;
  tokens.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    tokens.push_back(vocab.token_of(id));
  }
  write_rows(out, tokens, model.input, model.dim);
}

void save_embedding(const WordVectors& vectors, std::ostream& out) {
  write_rows(out, vectors.tokens, vectors.vectors, vectors.dim);
}

void save_embedding(const EmbeddingModel& model, const Vocabulary& vocab,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write embedding file: " + path);
  save_embedding(model, vocab, static_cast<std::ostream&>(out));
  if (!out.good()) throw IoError("failed writing embedding file: " + path);
}

WordVectors load_embedding(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  const auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) {
    throw MalformedEmbeddingFile("empty embedding file");
  }
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> vocab_size >> dim) || (header >> extra) ||
        vocab_size == 0 || dim == 0) {
      throw MalformedEmbeddingFile("bad header `V d` at line 1: \"" + line +
                                   "\"");
    }
  }

  WordVectors out;
  out.dim = dim;
  out.tokens.reserve(vocab_size);
  out.vectors.reserve(vocab_size * dim);
  for (std::size_t row = 0; row < vocab_size; ++row) {
    if (!next_line()) {
      throw MalformedEmbeddingFile(
          "expected " + std::to_string(vocab_size) + " rows, file ends at line " +
          std::to_string(line_number + 1));
    }
    const char* p = line.c_str();
    // token: up to the first blank
    const char* token_end = p;
    while (*token_end != '\0' && *token_end != ' ' && *token_end != '\t') {
      ++token_end;
    }
    if (token_end == p) {
      throw MalformedEmbeddingFile("missing token at line " +
                                   std::to_string(line_number));
    }
    out.tokens.emplace_back(p, token_end);
    const char* cursor = token_end;
    for (std::size_t i = 0; i < dim; ++i) {
      char* end = nullptr;
      const double value = std::strtod(cursor, &end);
      if (end == cursor) {
        throw MalformedEmbeddingFile(
            "expected " + std::to_string(dim) + " values at line " +
            std::to_string(line_number));
      }
      out.vectors.push_back(static_cast<float>(value));
      cursor = end;
    }
    while (*cursor == ' ' || *cursor == '\t') ++cursor;
    if (*cursor != '\0') {
      throw MalformedEmbeddingFile("trailing fields at line " +
                                   std::to_string(line_number));
    }
  }
  out.rebuild_index();
  if (out.index.size() != out.tokens.size()) {
    throw MalformedEmbeddingFile("duplicate token in embedding file");
  }
  return out;
}

WordVectors load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read embedding file: " + path);
  return load_embedding(static_cast<std::istream&>(in));
}

}  // namespace sphrase
