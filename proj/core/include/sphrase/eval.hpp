#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sphrase/embedding_io.hpp"
#include "sphrase/rng.hpp"

namespace sphrase {

/// dot(u, v) / (|u| |v|), accumulated in double. Throws ZeroVector when
/// either vector has zero norm.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

/// Phrases kept for the pairwise similarity score: id sequences of
/// length 2..7 whose tokens are all in the embedding (out-of-vocabulary
/// tokens are dropped before the length filter).
struct PhraseList {
  std::vector<std::vector<WordId>> phrases;
};

inline constexpr std::size_t kMinSimilarityPhraseLen = 2;
inline constexpr std::size_t kMaxSimilarityPhraseLen = 7;

/// Reads one phrase per line (space-separated tokens, normalized like the
/// corpus tokenizer) and applies the vocabulary/length filter.
PhraseList load_phrases(std::istream& in, const WordVectors& embedding);
PhraseList load_phrases(const std::string& path, const WordVectors& embedding);

struct SimilarityReport {
  struct PerLength {
    std::size_t length = 0;
    std::size_t phrase_count = 0;  // N_l
    double score = 0.0;            // in [0, 1]
  };
  std::vector<PerLength> rows;  // lengths with at least one phrase, ascending
  std::size_t repeats = 0;
};

/// For every phrase and every adjacent word pair (w_i, w_{i+1}), draws a
/// word r uniformly from the occurrences in other phrases (a fresh draw
/// per comparison) and scores 1 when s(w_i, w_{i+1}) > s(w_i, r). Scores
/// are averaged per phrase length over all phrases, adjacent pairs and
/// `repeats` rounds. Throws InsufficientPhrases when fewer than two
/// phrases exist.
SimilarityReport similarity_score(const PhraseList& phrases,
                                  const WordVectors& embedding,
                                  std::uint64_t seed,
                                  std::size_t repeats = 100);

struct AnalogyQuestion {
  std::string a, b, c, d;
  std::string category;
};

/// Standard analogy file: `: category-name` lines start a category, data
/// lines hold exactly four space-separated words. Throws
/// MalformedAnalogyFile with the line number.
std::vector<AnalogyQuestion> load_analogy_set(std::istream& in);
std::vector<AnalogyQuestion> load_analogy_set(const std::string& path);

struct AnalogyReport {
  struct Category {
    std::string name;
    std::size_t correct = 0;
    std::size_t total = 0;

    double accuracy() const {
      return total == 0 ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(total);
    }
  };
  std::vector<Category> categories;  // in first-appearance order
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t skipped_oov = 0;

  bool no_questions_evaluated() const { return total == 0; }
  double accuracy() const {
    return total == 0
               ? 0.0
               : static_cast<double>(correct) / static_cast<double>(total);
  }
};

/// 3CosAdd: predicts argmax over the vocabulary of
/// cosine(v(b) - v(a) + v(c), v(w)) excluding a, b and c; a question is
/// correct when the prediction is d. Lookups are lowercased; questions
/// with any out-of-vocabulary word are skipped and counted.
AnalogyReport analogy_accuracy(std::span<const AnalogyQuestion> questions,
                               const WordVectors& embedding,
                               std::size_t threads = 1);

/// Top-k in-vocabulary neighbors of `word` by cosine, excluding the word
/// itself. Throws std::invalid_argument for unknown words.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const WordVectors& embedding, std::string_view word, std::size_t topk);

void print_similarity_table(const SimilarityReport& report, std::ostream& out);
/// `length<TAB>count<TAB>score` lines.
void print_similarity_tsv(const SimilarityReport& report, std::ostream& out);
void print_analogy_table(const AnalogyReport& report, std::ostream& out);
/// `category<TAB>correct<TAB>total<TAB>accuracy` lines plus an `all` row.
void print_analogy_tsv(const AnalogyReport& report, std::ostream& out);

}  // namespace sphrase
