#pragma once

// Brute-force context enumeration used as an independent oracle for the
// pair generator. It rebuilds the unit partition and walks contexts
// directly from the regime definitions; only the published randomness
// protocol (drawn_window / drawn_word_index) is shared with the library.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sphrase/context.hpp"
#include "sphrase/vocab.hpp"

namespace oracle {

using PairMultiset = std::map<std::pair<sphrase::WordId, sphrase::WordId>,
                              std::size_t>;

inline PairMultiset count_pairs(const std::vector<sphrase::TrainingPair>& v) {
  PairMultiset out;
  for (const sphrase::TrainingPair& p : v) {
    ++out[{p.target, p.context}];
  }
  return out;
}

// Unit partition rebuilt by marking covered positions.
inline std::vector<std::pair<std::size_t, std::size_t>> units_of(
    const sphrase::EncodedSentence& s) {
  const std::size_t n = s.ids.size();
  std::vector<int> span_of(n, -1);
  for (std::size_t k = 0; k < s.spans.size(); ++k) {
    for (std::size_t p = s.spans[k].start; p < s.spans[k].end; ++p) {
      span_of[p] = static_cast<int>(k);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> units;
  std::size_t p = 0;
  while (p < n) {
    if (span_of[p] >= 0) {
      std::size_t q = p;
      while (q < n && span_of[q] == span_of[p]) ++q;
      units.emplace_back(p, q);
      p = q;
    } else {
      units.emplace_back(p, p + 1);
      ++p;
    }
  }
  return units;
}

inline PairMultiset enumerate_pairs(const sphrase::EncodedSentence& s,
                                    sphrase::Regime regime,
                                    std::size_t window,
                                    std::uint64_t stream_seed,
                                    bool fixed_window) {
  using sphrase::Regime;
  PairMultiset out;
  const std::size_t n = s.ids.size();

  if (regime == Regime::kWord2Vec) {
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t b = fixed_window
                                ? window
                                : sphrase::drawn_window(stream_seed, t, window);
      for (std::size_t off = 1; off <= b; ++off) {
        if (t >= off) ++out[{s.ids[t], s.ids[t - off]}];
        if (t + off < n) ++out[{s.ids[t], s.ids[t + off]}];
      }
    }
    return out;
  }

  const auto units = units_of(s);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const std::size_t b = fixed_window
                              ? window
                              : sphrase::drawn_window(stream_seed, u, window);
    std::vector<sphrase::WordId> context;
    if (regime == Regime::kSPhraseNU) {
      for (std::size_t off = b; off >= 1; --off) {
        if (units[u].first >= off) {
          context.push_back(s.ids[units[u].first - off]);
        }
      }
      for (std::size_t off = 0; off < b; ++off) {
        if (units[u].second + off < n) {
          context.push_back(s.ids[units[u].second + off]);
        }
      }
    } else {
      for (std::size_t j = 0; j < units.size(); ++j) {
        if (j == u) continue;
        const std::size_t dist = j < u ? u - j : j - u;
        if (dist > b) continue;
        const std::size_t len = units[j].second - units[j].first;
        if (regime == Regime::kSPhraseR && len > 1) {
          const std::size_t pick =
              sphrase::drawn_word_index(stream_seed, u, j, len);
          context.push_back(s.ids[units[j].first + pick]);
        } else {
          for (std::size_t p = units[j].first; p < units[j].second; ++p) {
            context.push_back(s.ids[p]);
          }
        }
      }
    }
    for (std::size_t p = units[u].first; p < units[u].second; ++p) {
      for (const sphrase::WordId c : context) {
        ++out[{s.ids[p], c}];
      }
    }
  }
  return out;
}

// Random sentence whose ids are the positions themselves, so a context
// multiset can be attributed to a unique position.
inline sphrase::EncodedSentence random_sentence(sphrase::Rng& rng,
                                                std::size_t max_tokens = 20) {
  sphrase::EncodedSentence s;
  const std::size_t n = 1 + rng.uniform(max_tokens);
  for (std::size_t i = 0; i < n; ++i) {
    s.ids.push_back(static_cast<sphrase::WordId>(i));
  }
  std::size_t pos = 0;
  while (pos + 2 <= n) {
    if (rng.uniform(3) == 0) {
      const std::size_t max_len = std::min<std::size_t>(n - pos, 10);
      const std::size_t len = 2 + rng.uniform(max_len - 1);
      s.spans.push_back({pos, pos + len});
      pos += len;
    } else {
      ++pos;
    }
  }
  return s;
}

}  // namespace oracle
