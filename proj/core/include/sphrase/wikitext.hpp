#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "sphrase/corpus.hpp"

namespace sphrase {

/// Sentences recovered from one wikitext article plus a count of markup
/// constructs that had to be treated as literal text (never fatal).
struct WikitextExtraction {
  std::vector<AnnotatedSentence> sentences;
  std::size_t malformed_markup = 0;
};

/// Extracts sentences from plain wikitext, treating hyperlink display text
/// as phrase annotation:
///   [[Target|Display Text]] -> tokens of "Display Text" as one phrase
///   [[Display Text]]        -> its own tokens as one phrase
/// Display texts that tokenize to a single token, or to more than
/// max_phrase_len tokens, keep their tokens but get no span. Category,
/// File and Image links are dropped entirely. Templates {{...}}, HTML
/// tags and comments, bold/italic quotes and heading markers are
/// stripped. Sentences are newline-delimited.
WikitextExtraction extract_wikitext(
    std::string_view article,
    std::size_t max_phrase_len = kDefaultMaxPhraseLen);

/// Streaming variant: sink is called once per non-empty sentence; returns
/// the malformed-markup count.
std::size_t extract_wikitext(
    std::string_view article, std::size_t max_phrase_len,
    const std::function<void(AnnotatedSentence)>& sink);

}  // namespace sphrase
