#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sphrase/trainer.hpp"
#include "sphrase/vocab.hpp"

namespace sphrase {

/// A read-only embedding: tokens in id order plus the V x d input-vector
/// matrix. This is what evaluation consumes and what the text format
/// round-trips.
struct WordVectors {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index;
  std::vector<float> vectors;  // V x d
  std::size_t dim = 0;

  std::size_t size() const { return tokens.size(); }
  std::span<const float> row(WordId id) const {
    return {vectors.data() + std::size_t(id) * dim, dim};
  }
  std::optional<WordId> id_of(std::string_view token) const {
    const auto it = index.find(token);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void rebuild_index();
};

WordVectors make_word_vectors(const EmbeddingModel& model,
                              const Vocabulary& vocab);

/// Text format: header `V d`, then one line per word with the token and
/// d space-separated floats (input vectors only), in id order. Floats
/// are printed with enough digits to round-trip float32 exactly.
void save_embedding(const EmbeddingModel& model, const Vocabulary& vocab,
                    std::ostream& out);
void save_embedding(const EmbeddingModel& model, const Vocabulary& vocab,
                    const std::string& path);
void save_embedding(const WordVectors& vectors, std::ostream& out);

/// Inverse of save_embedding; tolerates CRLF line endings. Throws
/// MalformedEmbeddingFile with the offending line number.
WordVectors load_embedding(std::istream& in);
WordVectors load_embedding(const std::string& path);

}  // namespace sphrase
