#include "sphrase/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphrase/errors.hpp"

namespace sphrase {

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (WordId id = 0; id < entries_.size(); ++id) {
    index_.emplace(entries_[id].token, id);
  }
}

Vocabulary Vocabulary::from_counts(
    const std::unordered_map<std::string, std::uint64_t>& counts,
    std::uint64_t min_count) {
  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.entries_.reserve(counts.size());
  for (const auto& [token, count] : counts) {
    if (count >= min_count) vocab.entries_.push_back({token, count});
  }
  if (vocab.entries_.empty()) {
    throw EmptyVocabulary("no token reaches min_count=" +
                          std::to_string(min_count));
  }
  std::sort(vocab.entries_.begin(), vocab.entries_.end(),
            [](const VocabEntry& a, const VocabEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.token < b.token;
            });
  vocab.rebuild_index();
  return vocab;
}

void Vocabulary::save(std::ostream& out) const {
  for (const VocabEntry& entry : entries_) {
    out << entry.token << '\t' << entry.count << '\n';
  }
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write vocabulary file: " + path);
  save(static_cast<std::ostream&>(out));
  if (!out.good()) throw IoError("failed writing vocabulary file: " + path);
}

Vocabulary Vocabulary::load(std::istream& in) {
  Vocabulary vocab;
  std::string line;
  std::size_t line_number = 0;
  std::uint64_t min_seen = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw MalformedVocabularyFile("expected `token<TAB>count` at line " +
                                    std::to_string(line_number));
    }
    VocabEntry entry;
    entry.token = line.substr(0, tab);
    try {
      entry.count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw MalformedVocabularyFile("bad count at line " +
                                    std::to_string(line_number));
    }
    if (vocab.index_.contains(std::string_view(entry.token))) {
      throw MalformedVocabularyFile("duplicate token at line " +
                                    std::to_string(line_number));
    }
    min_seen = any ? std::min(min_seen, entry.count) : entry.count;
    any = true;
    vocab.index_.emplace(entry.token, static_cast<WordId>(vocab.entries_.size()));
    vocab.entries_.push_back(std::move(entry));
  }
  if (!any) throw EmptyVocabulary("vocabulary file has no entries");
  vocab.min_count_ = min_seen;
  return vocab;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read vocabulary file: " + path);
  return load(static_cast<std::istream&>(in));
}

void VocabularyBuilder::add(const AnnotatedSentence& sentence) {
  for (const std::string& token : sentence.tokens) {
    ++counts_[token];
  }
}

void VocabularyBuilder::merge(const VocabularyBuilder& other) {
  for (const auto& [token, count] : other.counts_) {
    counts_[token] += count;
  }
}

Vocabulary VocabularyBuilder::finish(std::uint64_t min_count) const {
  return Vocabulary::from_counts(counts_, min_count);
}

Vocabulary build_vocabulary(const std::vector<AnnotatedSentence>& sentences,
                            std::uint64_t min_count) {
  VocabularyBuilder builder;
  for (const AnnotatedSentence& sentence : sentences) {
    builder.add(sentence);
  }
  return builder.finish(min_count);
}

NoiseDistribution noise_distribution(const Vocabulary& vocab, double power) {
  NoiseDistribution dist;
  dist.power = power;
  dist.probabilities.resize(vocab.size());
  double total = 0.0;
  for (WordId id = 0; id < vocab.size(); ++id) {
    const double weighted =
        std::pow(static_cast<double>(vocab.count_of(id)), power);
    dist.probabilities[id] = weighted;
    total += weighted;
  }
  for (double& p : dist.probabilities) p /= total;
  return dist;
}

EncodedSentence encode(const AnnotatedSentence& sentence,
                       const Vocabulary& vocab) {
  EncodedSentence encoded;
  encoded.ids.reserve(sentence.tokens.size());
  // survivors_before[i]: surviving tokens among positions [0, i)
  std::vector<std::size_t> survivors_before(sentence.tokens.size() + 1, 0);
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    survivors_before[i] = encoded.ids.size();
    if (const auto id = vocab.id_of(sentence.tokens[i])) {
      encoded.ids.push_back(*id);
    }
  }
  survivors_before[sentence.tokens.size()] = encoded.ids.size();
  for (const PhraseSpan& span : sentence.spans) {
    const PhraseSpan mapped{survivors_before[span.start],
                            survivors_before[span.end]};
    if (mapped.length() >= 2) encoded.spans.push_back(mapped);
  }
  return encoded;
}

AnnotatedSentence decode(const EncodedSentence& sentence,
                         const Vocabulary& vocab) {
  AnnotatedSentence decoded;
  decoded.tokens.reserve(sentence.ids.size());
  for (const WordId id : sentence.ids) {
    decoded.tokens.push_back(vocab.token_of(id));
  }
  decoded.spans = sentence.spans;
  return decoded;
}

}  // namespace sphrase
