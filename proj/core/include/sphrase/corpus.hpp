#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sphrase {

inline constexpr std::size_t kDefaultMaxPhraseLen = 10;

/// Half-open token range [start, end) marking a multi-word phrase.
/// Single words are not recorded as phrases, so end - start >= 2.
struct PhraseSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const PhraseSpan&) const = default;
};

/// One sentence of the corpus: surface tokens plus non-overlapping,
/// sorted phrase spans. The sentence is the scope within which contexts
/// are computed downstream.
struct AnnotatedSentence {
  std::vector<std::string> tokens;
  std::vector<PhraseSpan> spans;

  bool operator==(const AnnotatedSentence&) const = default;
};

/// Returns false (with a reason) when tokens/spans violate the type
/// invariants: span bounds, length in [2, max_phrase_len], ordering,
/// overlap, or whitespace inside a token.
bool validate_sentence(const AnnotatedSentence& sentence,
                       std::size_t max_phrase_len = kDefaultMaxPhraseLen,
                       std::string* reason = nullptr);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  /// Tokens covered by a phrase of the keyed length (2..max).
  std::map<std::size_t, std::size_t> phrase_tokens_by_len;

  /// bucket(len) / tokens; 0 when the corpus is empty.
  double proportion(std::size_t len) const;
};

/// Lowercases (ASCII) and strips leading/trailing punctuation from one
/// whitespace-free piece of text. Periods are kept so abbreviations such
/// as "w." survive as distinct tokens. Returns "" when nothing remains.
std::string normalize_token(std::string_view raw);

/// Whitespace-splits, normalizes each piece, drops empties. Deterministic.
std::vector<std::string> tokenize(std::string_view text);

/// Parses one line of the bracket corpus format: phrases are wrapped in
/// standalone "[" ... "]" markers, e.g.
///   british airways to [ new york ] has departed
/// One-token brackets are silently unwrapped; over-long ones keep their
/// tokens but drop the span. Throws MalformedAnnotation on unbalanced or
/// nested brackets (the line is identified in the message).
AnnotatedSentence parse_bracket_line(
    std::string_view line, std::size_t line_number = 0,
    std::size_t max_phrase_len = kDefaultMaxPhraseLen);

/// Inverse of parse_bracket_line for sentences whose tokens contain no
/// bracket characters.
std::string to_bracket_line(const AnnotatedSentence& sentence);

/// Streams a bracket corpus, one sentence per non-empty line.
void read_bracket_corpus(
    std::istream& in, const std::function<void(AnnotatedSentence)>& sink,
    std::size_t max_phrase_len = kDefaultMaxPhraseLen);

CorpusStats corpus_stats(const std::vector<AnnotatedSentence>& sentences);

/// Accumulating variant for streamed input.
void accumulate_stats(const AnnotatedSentence& sentence, CorpusStats& stats);

/// Line-oriented `key<TAB>value` report.
void write_stats_report(const CorpusStats& stats, std::ostream& out,
                        std::size_t max_phrase_len = kDefaultMaxPhraseLen);

}  // namespace sphrase
