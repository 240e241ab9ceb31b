#include "sphrase/context.hpp"

namespace sphrase {
namespace {

constexpr std::uint64_t kWindowDrawTag = 0x77696E646F77ULL;
constexpr std::uint64_t kWordChoiceTag = 0x63686F696365ULL;

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kWord2Vec:  return "word2vec";
    case Regime::kSPhrase:   return "sphrase";
    case Regime::kSPhraseNU: return "sphrase-nu";
    case Regime::kSPhraseR:  return "sphrase-r";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(std::string_view name) {
  if (name == "word2vec") return Regime::kWord2Vec;
  if (name == "sphrase") return Regime::kSPhrase;
  if (name == "sphrase-nu") return Regime::kSPhraseNU;
  if (name == "sphrase-r") return Regime::kSPhraseR;
  return std::nullopt;
}

std::vector<Unit> segment_units(const EncodedSentence& sentence) {
  std::vector<Unit> units;
  units.reserve(sentence.ids.size());
  std::size_t pos = 0;
  std::size_t next_span = 0;
  while (pos < sentence.ids.size()) {
    if (next_span < sentence.spans.size() &&
        sentence.spans[next_span].start == pos) {
      units.push_back({pos, sentence.spans[next_span].end});
      pos = sentence.spans[next_span].end;
      ++next_span;
    } else {
      units.push_back({pos, pos + 1});
      ++pos;
    }
  }
  return units;
}

std::size_t reduced_window(Rng& rng, std::size_t window) {
  return 1 + static_cast<std::size_t>(rng.uniform(window));
}

std::size_t drawn_window(std::uint64_t stream_seed, std::size_t unit_index,
                         std::size_t window) {
  Rng rng(mix_seed(stream_seed, kWindowDrawTag, unit_index));
  return reduced_window(rng, window);
}

std::size_t drawn_word_index(std::uint64_t stream_seed,
                             std::size_t target_unit, std::size_t context_unit,
                             std::size_t unit_length) {
  Rng rng(mix_seed(stream_seed, kWordChoiceTag, target_unit, context_unit));
  return static_cast<std::size_t>(rng.uniform(unit_length));
}

namespace {

void word2vec_pairs(const EncodedSentence& sentence, std::size_t window,
                    std::uint64_t stream_seed, bool fixed_window,
                    std::vector<TrainingPair>& out) {
  const std::size_t n = sentence.ids.size();
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t b =
        fixed_window ? window : drawn_window(stream_seed, t, window);
    const std::size_t lo = t >= b ? t - b : 0;
    const std::size_t hi = std::min(n - 1, t + b);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == t) continue;
      out.push_back({sentence.ids[t], sentence.ids[j]});
    }
  }
}

void unit_pairs(const EncodedSentence& sentence, Regime regime,
                std::size_t window, std::uint64_t stream_seed,
                bool fixed_window, std::vector<TrainingPair>& out) {
  const std::vector<Unit> units = segment_units(sentence);
  std::vector<WordId> context;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const Unit& unit = units[u];
    const std::size_t b =
        fixed_window ? window : drawn_window(stream_seed, u, window);
    context.clear();
    if (regime == Regime::kSPhraseNU) {
      // b individual words on each side of the target unit.
      const std::size_t lo = unit.start >= b ? unit.start - b : 0;
      for (std::size_t p = lo; p < unit.start; ++p) {
        context.push_back(sentence.ids[p]);
      }
      const std::size_t hi = std::min(sentence.ids.size(), unit.end + b);
      for (std::size_t p = unit.end; p < hi; ++p) {
        context.push_back(sentence.ids[p]);
      }
    } else {
      // b whole units on each side of the target unit.
      const std::size_t j_lo = u >= b ? u - b : 0;
      const std::size_t j_hi = std::min(units.size() - 1, u + b);
      for (std::size_t j = j_lo; j <= j_hi; ++j) {
        if (j == u) continue;
        const Unit& ctx_unit = units[j];
        if (regime == Regime::kSPhraseR && ctx_unit.length() > 1) {
          const std::size_t pick =
              drawn_word_index(stream_seed, u, j, ctx_unit.length());
          context.push_back(sentence.ids[ctx_unit.start + pick]);
        } else {
          for (std::size_t p = ctx_unit.start; p < ctx_unit.end; ++p) {
            context.push_back(sentence.ids[p]);
          }
        }
      }
    }
    for (std::size_t w = unit.start; w < unit.end; ++w) {
      for (const WordId c : context) {
        out.push_back({sentence.ids[w], c});
      }
    }
  }
}

}  // namespace

std::vector<TrainingPair> generate_pairs(const EncodedSentence& sentence,
                                         Regime regime, std::size_t window,
                                         std::uint64_t stream_seed,
                                         bool fixed_window) {
  std::vector<TrainingPair> pairs;
  if (regime == Regime::kWord2Vec) {
    word2vec_pairs(sentence, window, stream_seed, fixed_window, pairs);
  } else {
    unit_pairs(sentence, regime, window, stream_seed, fixed_window, pairs);
  }
  return pairs;
}

}  // namespace sphrase
