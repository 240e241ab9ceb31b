#include "sphrase/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "sphrase/corpus.hpp"
#include "sphrase/errors.hpp"

namespace sphrase {
namespace {

template <class Real>
double cosine_impl(std::span<const Real> u, std::span<const Real> v) {
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * static_cast<double>(v[i]);
    nu += static_cast<double>(u[i]) * static_cast<double>(u[i]);
    nv += static_cast<double>(v[i]) * static_cast<double>(v[i]);
  }
  if (nu == 0.0 || nv == 0.0) {
    throw ZeroVector("cosine of an all-zero vector");
  }
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  return cosine_impl(u, v);
}
double cosine(std::span<const double> u, std::span<const double> v) {
  return cosine_impl(u, v);
}

PhraseList load_phrases(std::istream& in, const WordVectors& embedding) {
  PhraseList list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<WordId> ids;
    for (const std::string& token : tokenize(line)) {
      if (const auto id = embedding.id_of(token)) ids.push_back(*id);
    }
    if (ids.size() >= kMinSimilarityPhraseLen &&
        ids.size() <= kMaxSimilarityPhraseLen) {
      list.phrases.push_back(std::move(ids));
    }
  }
  return list;
}

PhraseList load_phrases(const std::string& path,
                        const WordVectors& embedding) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read phrase file: " + path);
  return load_phrases(static_cast<std::istream&>(in), embedding);
}

namespace {

// Unit vectors for the word ids a computation touches; throws ZeroVector
// on first use of an all-zero row.
class UnitRows {
 public:
  explicit UnitRows(const WordVectors& embedding)
      : embedding_(embedding),
        rows_(embedding.size() * embedding.dim, 0.0f),
        ready_(embedding.size(), false) {}

  std::span<const float> row(WordId id) {
    if (!ready_[id]) {
      const auto src = embedding_.row(id);
      double norm2 = 0.0;
      for (const float x : src) norm2 += static_cast<double>(x) * x;
      if (norm2 == 0.0) {
        throw ZeroVector("all-zero vector for token \"" +
                         embedding_.tokens[id] + "\"");
      }
      const double inv = 1.0 / std::sqrt(norm2);
      float* dst = rows_.data() + std::size_t(id) * embedding_.dim;
      for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<float>(src[i] * inv);
      }
      ready_[id] = true;
    }
    return {rows_.data() + std::size_t(id) * embedding_.dim, embedding_.dim};
  }

 private:
  const WordVectors& embedding_;
  std::vector<float> rows_;
  std::vector<char> ready_;
};

double unit_dot(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return dot;
}

}  // namespace

SimilarityReport similarity_score(const PhraseList& phrases,
                                  const WordVectors& embedding,
                                  std::uint64_t seed, std::size_t repeats) {
  if (phrases.phrases.size() < 2) {
    throw InsufficientPhrases(
        "need at least two phrases to draw a random word from another one");
  }

  struct Occurrence {
    std::uint32_t phrase;
    WordId word;
  };
  std::vector<Occurrence> pool;
  for (std::uint32_t p = 0; p < phrases.phrases.size(); ++p) {
    for (const WordId id : phrases.phrases[p]) {
      pool.push_back({p, id});
    }
  }

  UnitRows units(embedding);
  // Adjacent-pair cosines are reused across repeats.
  struct Comparison {
    std::uint32_t phrase;
    WordId left;
    double pair_cosine;
  };
  std::vector<std::vector<Comparison>> by_length(kMaxSimilarityPhraseLen + 1);
  std::vector<std::size_t> phrase_count(kMaxSimilarityPhraseLen + 1, 0);
  for (std::uint32_t p = 0; p < phrases.phrases.size(); ++p) {
    const std::vector<WordId>& phrase = phrases.phrases[p];
    ++phrase_count[phrase.size()];
    for (std::size_t i = 0; i + 1 < phrase.size(); ++i) {
      by_length[phrase.size()].push_back(
          {p, phrase[i],
           unit_dot(units.row(phrase[i]), units.row(phrase[i + 1]))});
    }
  }

  std::vector<std::uint64_t> hits(kMaxSimilarityPhraseLen + 1, 0);
  Rng rng(mix_seed(seed, 0x73696DULL));
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    for (std::size_t len = kMinSimilarityPhraseLen;
         len <= kMaxSimilarityPhraseLen; ++len) {
      for (const Comparison& cmp : by_length[len]) {
        Occurrence r{};
        do {
          r = pool[rng.uniform(pool.size())];
        } while (r.phrase == cmp.phrase);
        const double random_cosine =
            unit_dot(units.row(cmp.left), units.row(r.word));
        if (cmp.pair_cosine > random_cosine) ++hits[len];
      }
    }
  }

  SimilarityReport report;
  report.repeats = repeats;
  for (std::size_t len = kMinSimilarityPhraseLen;
       len <= kMaxSimilarityPhraseLen; ++len) {
    if (phrase_count[len] == 0) continue;
    const double denom = static_cast<double>(phrase_count[len]) *
                         static_cast<double>(len - 1) *
                         static_cast<double>(repeats);
    report.rows.push_back(
        {len, phrase_count[len], static_cast<double>(hits[len]) / denom});
  }
  return report;
}

std::vector<AnalogyQuestion> load_analogy_set(std::istream& in) {
  std::vector<AnalogyQuestion> questions;
  std::string line;
  std::string category = "uncategorized";
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> words;
    std::string word;
    while (fields >> word) words.push_back(word);
    if (words.empty()) continue;
    if (words.front().front() == ':') {
      category = words.size() > 1 ? words[1] : words.front().substr(1);
      if (category.empty()) {
        throw MalformedAnalogyFile("empty category name at line " +
                                   std::to_string(line_number));
      }
      continue;
    }
    if (words.size() != 4) {
      throw MalformedAnalogyFile(
          "expected 4 words at line " + std::to_string(line_number) +
          ", got " + std::to_string(words.size()));
    }
    questions.push_back(
        {std::move(words[0]), std::move(words[1]), std::move(words[2]),
         std::move(words[3]), category});
  }
  return questions;
}

std::vector<AnalogyQuestion> load_analogy_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read analogy file: " + path);
  return load_analogy_set(static_cast<std::istream&>(in));
}

namespace {

std::string ascii_lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

AnalogyReport analogy_accuracy(std::span<const AnalogyQuestion> questions,
                               const WordVectors& embedding,
                               std::size_t threads) {
  AnalogyReport report;
  std::unordered_map<std::string, std::size_t> category_index;
  for (const AnalogyQuestion& q : questions) {
    if (category_index.emplace(q.category, report.categories.size()).second) {
      report.categories.push_back({q.category, 0, 0});
    }
  }

  const std::size_t dim = embedding.dim;
  // Unit rows for the whole vocabulary; zero rows are unreachable.
  std::vector<float> unit(embedding.vectors.size());
  std::vector<char> nonzero(embedding.size(), 0);
  for (std::size_t w = 0; w < embedding.size(); ++w) {
    double norm2 = 0.0;
    const auto row = embedding.row(static_cast<WordId>(w));
    for (const float x : row) norm2 += static_cast<double>(x) * x;
    if (norm2 == 0.0) continue;
    nonzero[w] = 1;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim; ++i) {
      unit[w * dim + i] = static_cast<float>(row[i] * inv);
    }
  }

  struct Tally {
    std::vector<std::size_t> correct, total;
    std::size_t skipped = 0;
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(threads, questions.size()));
  std::vector<Tally> tallies(workers);
  for (Tally& t : tallies) {
    t.correct.assign(report.categories.size(), 0);
    t.total.assign(report.categories.size(), 0);
  }

  const auto evaluate_range = [&](std::size_t begin, std::size_t end,
                                  Tally& tally) {
    std::vector<double> target(dim);
    for (std::size_t qi = begin; qi < end; ++qi) {
      const AnalogyQuestion& q = questions[qi];
      const auto ia = embedding.id_of(ascii_lower_copy(q.a));
      const auto ib = embedding.id_of(ascii_lower_copy(q.b));
      const auto ic = embedding.id_of(ascii_lower_copy(q.c));
      const auto id = embedding.id_of(ascii_lower_copy(q.d));
      if (!ia || !ib || !ic || !id) {
        ++tally.skipped;
        continue;
      }
      const std::size_t cat = category_index.at(q.category);
      ++tally.total[cat];

      const auto va = embedding.row(*ia);
      const auto vb = embedding.row(*ib);
      const auto vc = embedding.row(*ic);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        target[i] = static_cast<double>(vb[i]) - static_cast<double>(va[i]) +
                    static_cast<double>(vc[i]);
        norm2 += target[i] * target[i];
      }
      if (norm2 == 0.0) continue;  // no prediction possible: wrong

      double best = -std::numeric_limits<double>::infinity();
      WordId best_id = 0;
      bool any = false;
      for (std::size_t w = 0; w < embedding.size(); ++w) {
        if (!nonzero[w] || w == *ia || w == *ib || w == *ic) continue;
        double dot = 0.0;
        const float* u = unit.data() + w * dim;
        for (std::size_t i = 0; i < dim; ++i) {
          dot += target[i] * static_cast<double>(u[i]);
        }
        if (dot > best) {
          best = dot;
          best_id = static_cast<WordId>(w);
          any = true;
        }
      }
      if (any && best_id == *id) ++tally.correct[cat];
    }
  };

  if (workers <= 1) {
    evaluate_range(0, questions.size(), tallies[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (questions.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(questions.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(evaluate_range, begin, end, std::ref(tallies[w]));
    }
    for (std::thread& t : pool) t.join();
  }

  for (const Tally& tally : tallies) {
    report.skipped_oov += tally.skipped;
    for (std::size_t c = 0; c < report.categories.size(); ++c) {
      report.categories[c].correct += tally.correct[c];
      report.categories[c].total += tally.total[c];
    }
  }
  for (const AnalogyReport::Category& cat : report.categories) {
    report.correct += cat.correct;
    report.total += cat.total;
  }
  return report;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const WordVectors& embedding, std::string_view word, std::size_t topk) {
  const auto query = embedding.id_of(ascii_lower_copy(word));
  if (!query) {
    throw std::invalid_argument("word not in vocabulary: " +
                                std::string(word));
  }
  const auto query_row = embedding.row(*query);
  std::vector<std::pair<double, WordId>> scored;
  scored.reserve(embedding.size());
  for (std::size_t w = 0; w < embedding.size(); ++w) {
    if (w == *query) continue;
    double norm2 = 0.0;
    for (const float x : embedding.row(static_cast<WordId>(w))) {
      norm2 += static_cast<double>(x) * x;
    }
    if (norm2 == 0.0) continue;
    scored.emplace_back(
        cosine(query_row, embedding.row(static_cast<WordId>(w))),
        static_cast<WordId>(w));
  }
  const std::size_t k = std::min(topk, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(embedding.tokens[scored[i].second], scored[i].first);
  }
  return out;
}

void print_similarity_table(const SimilarityReport& report,
                            std::ostream& out) {
  out << std::left << std::setw(8) << "length" << std::setw(10) << "phrases"
      << "score" << '\n';
  for (const auto& row : report.rows) {
    char score[32];
    std::snprintf(score, sizeof(score), "%.6f", row.score);
    out << std::left << std::setw(8) << row.length << std::setw(10)
        << row.phrase_count << score << '\n';
  }
  out << "(" << report.repeats << " repeats)" << '\n';
}

void print_similarity_tsv(const SimilarityReport& report, std::ostream& out) {
  for (const auto& row : report.rows) {
    char score[32];
    std::snprintf(score, sizeof(score), "%.6f", row.score);
    out << row.length << '\t' << row.phrase_count << '\t' << score << '\n';
  }
}

void print_analogy_table(const AnalogyReport& report, std::ostream& out) {
  std::size_t width = 8;
  for (const auto& cat : report.categories) {
    width = std::max(width, cat.name.size() + 2);
  }
  out << std::left << std::setw(static_cast<int>(width)) << "category"
      << std::right << std::setw(9) << "correct" << std::setw(9) << "total"
      << "  accuracy" << '\n';
  const auto row = [&](const std::string& name, std::size_t correct,
                       std::size_t total, double accuracy) {
    char acc[32];
    std::snprintf(acc, sizeof(acc), "%.6f", accuracy);
    out << std::left << std::setw(static_cast<int>(width)) << name
        << std::right << std::setw(9) << correct << std::setw(9) << total
        << "  " << acc << '\n';
  };
  for (const auto& cat : report.categories) {
    row(cat.name, cat.correct, cat.total, cat.accuracy());
  }
  row("all", report.correct, report.total, report.accuracy());
  out << "skipped (out-of-vocabulary): " << report.skipped_oov << '\n';
}

void print_analogy_tsv(const AnalogyReport& report, std::ostream& out) {
  const auto row = [&](const std::string& name, std::size_t correct,
                       std::size_t total, double accuracy) {
    char acc[32];
    std::snprintf(acc, sizeof(acc), "%.6f", accuracy);
    out << name << '\t' << correct << '\t' << total << '\t' << acc << '\n';
  };
  for (const auto& cat : report.categories) {
    row(cat.name, cat.correct, cat.total, cat.accuracy());
  }
  row("all", report.correct, report.total, report.accuracy());
}

}  // namespace sphrase
