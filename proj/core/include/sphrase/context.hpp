#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sphrase/rng.hpp"
#include "sphrase/vocab.hpp"

namespace sphrase {

/// Context-selection regime.
///   kWord2Vec  - classic skip-gram windows over word positions.
///   kSPhrase   - unit context sampling: contexts are whole units around
///                the target unit; all words of a phrase share them.
///   kSPhraseNU - the target is a unit but contexts are counted as
///                individual words.
///   kSPhraseR  - unit contexts, then one word drawn uniformly from each
///                multi-word context unit, matching the baseline's
///                effective context length.
enum class Regime { kWord2Vec, kSPhrase, kSPhraseNU, kSPhraseR };

std::string_view to_string(Regime regime);
std::optional<Regime> parse_regime(std::string_view name);

/// One element of a sentence's unit partition: a single word or a whole
/// phrase, as a half-open token range.
struct Unit {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const Unit&) const = default;
};

struct TrainingPair {
  WordId target = 0;
  WordId context = 0;

  bool operator==(const TrainingPair&) const = default;
  auto operator<=>(const TrainingPair&) const = default;
};

/// Partitions the sentence into units: each phrase span is one unit,
/// every uncovered token a singleton.
std::vector<Unit> segment_units(const EncodedSentence& sentence);

/// The reduced-window draw: b uniform on {1, ..., window}.
std::size_t reduced_window(Rng& rng, std::size_t window);

// Randomness protocol for pair generation (stable, relied on by golden
// tests): every draw derives from the sentence's 64-bit stream seed.
// Window draws key on the target unit index (the word position for
// kWord2Vec); word choices key on (target unit, context unit). Draws are
// therefore independent of the window size and of each other.

std::size_t drawn_window(std::uint64_t stream_seed, std::size_t unit_index,
                         std::size_t window);
std::size_t drawn_word_index(std::uint64_t stream_seed,
                             std::size_t target_unit, std::size_t context_unit,
                             std::size_t unit_length);

/// Emits target-context pairs for one sentence under the given regime.
/// b is drawn once per target unit (per word position for kWord2Vec);
/// with fixed_window set, b == window and no window draws are consumed.
/// Pairs are ordered targets left to right, contexts left to right, and
/// words of one unit are never contexts for each other.
std::vector<TrainingPair> generate_pairs(const EncodedSentence& sentence,
                                         Regime regime, std::size_t window,
                                         std::uint64_t stream_seed,
                                         bool fixed_window = false);

}  // namespace sphrase
