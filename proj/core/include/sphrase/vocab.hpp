#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sphrase/corpus.hpp"

namespace sphrase {

using WordId = std::uint32_t;

struct VocabEntry {
  std::string token;
  std::uint64_t count = 0;

  bool operator==(const VocabEntry&) const = default;
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

/// Token<->id map with corpus counts. Ids are dense 0..V-1, assigned by
/// descending count then lexicographic token.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Sorts, filters by min_count and assigns ids. Throws EmptyVocabulary
  /// when nothing survives.
  static Vocabulary from_counts(
      const std::unordered_map<std::string, std::uint64_t>& counts,
      std::uint64_t min_count);

  std::size_t size() const { return entries_.size(); }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::uint64_t min_count() const { return min_count_; }

  std::optional<WordId> id_of(std::string_view token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& token_of(WordId id) const { return entries_[id].token; }
  std::uint64_t count_of(WordId id) const { return entries_[id].count; }

  /// UTF-8 lines `token<TAB>count` in id order.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;

  /// Ids are reconstructed from line order; counts are taken verbatim.
  static Vocabulary load(std::istream& in);
  static Vocabulary load(const std::string& path);

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> index_;
  std::uint64_t min_count_ = 1;

  void rebuild_index();
};

/// Streaming token counter; per-worker counters can be merged before the
/// final sort.
class VocabularyBuilder {
 public:
  void add(const AnnotatedSentence& sentence);
  void merge(const VocabularyBuilder& other);
  Vocabulary finish(std::uint64_t min_count) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

Vocabulary build_vocabulary(const std::vector<AnnotatedSentence>& sentences,
                            std::uint64_t min_count);

/// Unigram law for candidate sampling: probability(w) proportional to
/// count(w)^power.
struct NoiseDistribution {
  std::vector<double> probabilities;
  double power = 0.75;
};

NoiseDistribution noise_distribution(const Vocabulary& vocab, double power);

/// Sentence mapped into id space. Out-of-vocabulary tokens are dropped
/// and spans re-indexed over the survivors; spans reduced below two
/// tokens disappear.
struct EncodedSentence {
  std::vector<WordId> ids;
  std::vector<PhraseSpan> spans;

  bool operator==(const EncodedSentence&) const = default;
};

EncodedSentence encode(const AnnotatedSentence& sentence,
                       const Vocabulary& vocab);

/// Inverse of encode for in-vocabulary sentences (debugging, tests).
AnnotatedSentence decode(const EncodedSentence& sentence,
                         const Vocabulary& vocab);

}  // namespace sphrase
