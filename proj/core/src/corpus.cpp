#include "sphrase/corpus.hpp"

#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphrase/errors.hpp"

namespace sphrase {
namespace {

struct Codepoint {
  std::uint32_t value;
  std::size_t bytes;
};

// Decodes the UTF-8 sequence starting at `pos`. Invalid bytes are passed
// through one at a time as opaque characters.
Codepoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[i]));
  };
  const std::uint32_t b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    return {((b0 & 0x1F) << 6) | (byte(pos + 1) & 0x3F), 2};
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    return {((b0 & 0x0F) << 12) | ((byte(pos + 1) & 0x3F) << 6) |
                (byte(pos + 2) & 0x3F),
            3};
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    return {((b0 & 0x07) << 18) | ((byte(pos + 1) & 0x3F) << 12) |
                ((byte(pos + 2) & 0x3F) << 6) | (byte(pos + 3) & 0x3F),
            4};
  }
  return {b0, 1};
}

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Punctuation stripped from token edges. The full stop is deliberately
// absent: abbreviations ("w.", "u.s.") stay distinct tokens.
bool is_strip_punct_cp(std::uint32_t cp) {
  if (cp < 0x80) {
    return cp != '.' && std::ispunct(static_cast<int>(cp)) != 0;
  }
  switch (cp) {
    case 0xA1: case 0xB7: case 0xAB: case 0xBB: case 0xBF:
    case 0x2022: case 0x2026: case 0x2032: case 0x2033:
    case 0x2039: case 0x203A:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2015) || (cp >= 0x2018 && cp <= 0x201F);
  }
}

bool is_punct_or_dot(std::uint32_t cp) {
  return cp == '.' || is_strip_punct_cp(cp);
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> pieces;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const Codepoint cp = decode_utf8(text, pos);
    if (is_space_cp(cp.value)) {
      if (!current.empty()) {
        pieces.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.append(text.substr(pos, cp.bytes));
    }
    pos += cp.bytes;
  }
  if (!current.empty()) pieces.push_back(std::move(current));
  return pieces;
}

std::string_view clip(std::string_view line) {
  return line.substr(0, std::min<std::size_t>(line.size(), 120));
}

std::string annotate_error(std::string_view what, std::string_view line,
                           std::size_t line_number) {
  std::ostringstream msg;
  msg << what;
  if (line_number > 0) msg << " at line " << line_number;
  msg << ": \"" << clip(line) << "\"";
  return msg.str();
}

}  // namespace

std::string normalize_token(std::string_view raw) {
  struct Item {
    std::uint32_t cp;
    std::size_t offset;
    std::size_t bytes;
  };
  std::vector<Item> items;
  items.reserve(raw.size());
  for (std::size_t pos = 0; pos < raw.size();) {
    const Codepoint cp = decode_utf8(raw, pos);
    items.push_back({cp.value, pos, cp.bytes});
    pos += cp.bytes;
  }
  std::size_t lo = 0;
  std::size_t hi = items.size();
  while (lo < hi && is_strip_punct_cp(items[lo].cp)) ++lo;
  while (hi > lo && is_strip_punct_cp(items[hi - 1].cp)) --hi;

  bool has_word_char = false;
  for (std::size_t i = lo; i < hi; ++i) {
    if (!is_punct_or_dot(items[i].cp)) {
      has_word_char = true;
      break;
    }
  }
  if (!has_word_char) return {};

  std::string out;
  for (std::size_t i = lo; i < hi; ++i) {
    const Item& it = items[i];
    if (it.cp < 0x80) {
      out.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(raw[it.offset]))));
    } else {
      out.append(raw.substr(it.offset, it.bytes));
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string& piece : split_whitespace(text)) {
    std::string token = normalize_token(piece);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

bool validate_sentence(const AnnotatedSentence& sentence,
                       std::size_t max_phrase_len, std::string* reason) {
  const auto fail = [&](std::string why) {
    if (reason) *reason = std::move(why);
    return false;
  };
  for (const std::string& token : sentence.tokens) {
    if (token.empty()) return fail("empty token");
    for (std::size_t pos = 0; pos < token.size();) {
      const Codepoint cp = decode_utf8(token, pos);
      if (is_space_cp(cp.value)) return fail("whitespace inside token");
      pos += cp.bytes;
    }
  }
  std::size_t previous_end = 0;
  bool first = true;
  for (const PhraseSpan& span : sentence.spans) {
    if (span.start >= span.end || span.end > sentence.tokens.size()) {
      return fail("span out of bounds");
    }
    if (span.length() < 2) return fail("span shorter than 2 tokens");
    if (span.length() > max_phrase_len) return fail("span exceeds max length");
    if (!first && span.start < previous_end) {
      return fail("spans overlap or are unsorted");
    }
    previous_end = span.end;
    first = false;
  }
  return true;
}

AnnotatedSentence parse_bracket_line(std::string_view line,
                                     std::size_t line_number,
                                     std::size_t max_phrase_len) {
  AnnotatedSentence sentence;
  bool in_phrase = false;
  std::size_t phrase_start = 0;
  for (const std::string& field : split_whitespace(line)) {
    if (field == "[") {
      if (in_phrase) {
        throw MalformedAnnotation(
            annotate_error("nested '[' in bracket annotation", line,
                           line_number));
      }
      in_phrase = true;
      phrase_start = sentence.tokens.size();
    } else if (field == "]") {
      if (!in_phrase) {
        throw MalformedAnnotation(
            annotate_error("']' without matching '['", line, line_number));
      }
      in_phrase = false;
      const std::size_t len = sentence.tokens.size() - phrase_start;
      if (len >= 2 && len <= max_phrase_len) {
        sentence.spans.push_back({phrase_start, sentence.tokens.size()});
      }
    } else {
      std::string token = normalize_token(field);
      if (!token.empty()) sentence.tokens.push_back(std::move(token));
    }
  }
  if (in_phrase) {
    throw MalformedAnnotation(
        annotate_error("'[' without matching ']'", line, line_number));
  }
  return sentence;
}

std::string to_bracket_line(const AnnotatedSentence& sentence) {
  std::string out;
  std::size_t next_span = 0;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    if (next_span < sentence.spans.size() &&
        sentence.spans[next_span].start == i) {
      out.append("[ ");
    }
    out.append(sentence.tokens[i]);
    if (next_span < sentence.spans.size() &&
        sentence.spans[next_span].end == i + 1) {
      out.append(" ]");
      ++next_span;
    }
  }
  return out;
}

void read_bracket_corpus(std::istream& in,
                         const std::function<void(AnnotatedSentence)>& sink,
                         std::size_t max_phrase_len) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    AnnotatedSentence sentence =
        parse_bracket_line(line, line_number, max_phrase_len);
    if (!sentence.tokens.empty()) sink(std::move(sentence));
  }
}

double CorpusStats::proportion(std::size_t len) const {
  if (tokens == 0) return 0.0;
  const auto it = phrase_tokens_by_len.find(len);
  if (it == phrase_tokens_by_len.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(tokens);
}

void accumulate_stats(const AnnotatedSentence& sentence, CorpusStats& stats) {
  stats.sentences += 1;
  stats.tokens += sentence.tokens.size();
  for (const PhraseSpan& span : sentence.spans) {
    stats.phrase_tokens_by_len[span.length()] += span.length();
  }
}

CorpusStats corpus_stats(const std::vector<AnnotatedSentence>& sentences) {
  CorpusStats stats;
  for (const AnnotatedSentence& sentence : sentences) {
    accumulate_stats(sentence, stats);
  }
  return stats;
}

void write_stats_report(const CorpusStats& stats, std::ostream& out,
                        std::size_t max_phrase_len) {
  out << "sentences\t" << stats.sentences << "\n";
  out << "tokens\t" << stats.tokens << "\n";
  for (std::size_t len = 2; len <= max_phrase_len; ++len) {
    const auto it = stats.phrase_tokens_by_len.find(len);
    const std::size_t count =
        it == stats.phrase_tokens_by_len.end() ? 0 : it->second;
    out << "phrase_tokens_" << len << "\t" << count << "\n";
    out << "phrase_token_share_" << len << "\t" << stats.proportion(len)
        << "\n";
  }
}

}  // namespace sphrase
