#include "sphrase/wikitext.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace sphrase {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_dropped_namespace(std::string_view target) {
  const std::size_t colon = target.find(':');
  if (colon == std::string_view::npos) return false;
  const std::string ns = ascii_lower(trim(target.substr(0, colon)));
  return ns == "category" || ns == "file" || ns == "image";
}

// Removes <!-- ... --> comments. An unclosed opener stays literal.
std::string strip_comments(std::string_view line, std::size_t& warnings) {
  std::string out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t open = line.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(line.substr(pos));
      break;
    }
    out.append(line.substr(pos, open - pos));
    const std::size_t close = line.find("-->", open + 4);
    if (close == std::string_view::npos) {
      ++warnings;
      out.append(line.substr(open));
      break;
    }
    pos = close + 3;
  }
  return out;
}

// Removes {{ ... }} templates, honoring nesting. Unclosed openers stay
// literal.
std::string strip_templates(std::string_view line, std::size_t& warnings) {
  std::string out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t open = line.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(line.substr(pos));
      break;
    }
    out.append(line.substr(pos, open - pos));
    std::size_t depth = 1;
    std::size_t i = open + 2;
    std::size_t close = std::string_view::npos;
    while (i < line.size()) {
      if (line.compare(i, 2, "{{") == 0) {
        ++depth;
        i += 2;
      } else if (line.compare(i, 2, "}}") == 0) {
        --depth;
        if (depth == 0) {
          close = i;
          break;
        }
        i += 2;
      } else {
        ++i;
      }
    }
    if (close == std::string_view::npos) {
      ++warnings;
      out.append("{{");
      pos = open + 2;
      continue;
    }
    out.push_back(' ');
    pos = close + 2;
  }
  return out;
}

// Removes HTML-ish tags <...> (replaced by a space). A '<' that does not
// begin a tag is literal text.
std::string strip_tags(std::string_view line, std::size_t& warnings) {
  std::string out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char c = line[pos];
    if (c != '<') {
      out.push_back(c);
      ++pos;
      continue;
    }
    const bool tag_like =
        pos + 1 < line.size() &&
        (line[pos + 1] == '/' ||
         std::isalpha(static_cast<unsigned char>(line[pos + 1])));
    if (!tag_like) {
      out.push_back(c);
      ++pos;
      continue;
    }
    const std::size_t close = line.find('>', pos + 1);
    if (close == std::string_view::npos) {
      ++warnings;
      out.push_back(c);
      ++pos;
      continue;
    }
    out.push_back(' ');
    pos = close + 1;
  }
  return out;
}

// Removes wiki bold/italic markers: runs of two or more apostrophes.
std::string strip_quotes(std::string_view line) {
  std::string out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == '\'') {
      std::size_t run = 1;
      while (pos + run < line.size() && line[pos + run] == '\'') ++run;
      if (run == 1) out.push_back('\'');
      pos += run;
    } else {
      out.push_back(line[pos]);
      ++pos;
    }
  }
  return out;
}

// "== History ==" -> " History ".
std::string strip_heading(std::string_view line) {
  const std::string_view t = trim(line);
  if (t.size() < 2 || t.front() != '=' || t.back() != '=') {
    return std::string(line);
  }
  std::size_t lo = 0;
  std::size_t hi = t.size();
  while (lo < hi && t[lo] == '=') ++lo;
  while (hi > lo && t[hi - 1] == '=') --hi;
  return std::string(t.substr(lo, hi - lo));
}

// Finds the "]]" matching the "[[" at `open`, honoring nesting. Returns
// npos when unclosed.
std::size_t matching_close(std::string_view line, std::size_t open) {
  std::size_t depth = 1;
  std::size_t i = open + 2;
  while (i < line.size()) {
    if (line.compare(i, 2, "[[") == 0) {
      ++depth;
      i += 2;
    } else if (line.compare(i, 2, "]]") == 0) {
      --depth;
      if (depth == 0) return i;
      i += 2;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

// Splits link content at the first pipe that is not inside a nested link.
std::size_t top_level_pipe(std::string_view content) {
  std::size_t depth = 0;
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (content.compare(i, 2, "[[") == 0) {
      ++depth;
      ++i;
    } else if (content.compare(i, 2, "]]") == 0) {
      if (depth > 0) --depth;
      ++i;
    } else if (content[i] == '|' && depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::string flatten_links(std::string_view text, std::size_t& warnings);

// Reduces one link's content to the text it displays; empty for dropped
// namespaces.
std::string link_display_text(std::string_view content, std::size_t& warnings) {
  const std::size_t pipe = top_level_pipe(content);
  const std::string_view target =
      pipe == std::string_view::npos ? content : content.substr(0, pipe);
  if (is_dropped_namespace(target)) return {};
  std::string_view display =
      pipe == std::string_view::npos ? content : content.substr(pipe + 1);
  if (trim(display).empty()) display = target;
  return flatten_links(display, warnings);
}

// Replaces nested [[...]] links inside display text with their own
// display text.
std::string flatten_links(std::string_view text, std::size_t& warnings) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find("[[", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const std::size_t close = matching_close(text, open);
    if (close == std::string_view::npos) {
      ++warnings;
      out.append("[[");
      pos = open + 2;
      continue;
    }
    out.push_back(' ');
    out.append(
        link_display_text(text.substr(open + 2, close - open - 2), warnings));
    out.push_back(' ');
    pos = close + 2;
  }
  return out;
}

struct Chunk {
  std::string text;
  bool phrase = false;
};

void sentence_from_line(std::string_view raw_line, std::size_t max_phrase_len,
                        std::size_t& warnings,
                        const std::function<void(AnnotatedSentence)>& sink) {
  std::string line = strip_comments(raw_line, warnings);
  line = strip_templates(line, warnings);
  line = strip_tags(line, warnings);
  line = strip_quotes(line);
  line = strip_heading(line);

  std::vector<Chunk> chunks;
  std::string current;
  const auto flush_text = [&] {
    if (!current.empty()) {
      chunks.push_back({std::move(current), false});
      current.clear();
    }
  };

  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t open = line.find("[[", pos);
    if (open == std::string::npos) {
      current.append(line.substr(pos));
      break;
    }
    current.append(line.substr(pos, open - pos));
    const std::size_t close = matching_close(line, open);
    if (close == std::string::npos) {
      ++warnings;
      current.append("[[");
      pos = open + 2;
      continue;
    }
    const std::string display = link_display_text(
        std::string_view(line).substr(open + 2, close - open - 2), warnings);
    if (!display.empty()) {
      flush_text();
      chunks.push_back({display, true});
    }
    pos = close + 2;
  }
  flush_text();

  AnnotatedSentence sentence;
  for (const Chunk& chunk : chunks) {
    std::vector<std::string> tokens = tokenize(chunk.text);
    if (chunk.phrase && tokens.size() >= 2 && tokens.size() <= max_phrase_len) {
      sentence.spans.push_back(
          {sentence.tokens.size(), sentence.tokens.size() + tokens.size()});
    }
    for (std::string& token : tokens) {
      sentence.tokens.push_back(std::move(token));
    }
  }
  if (!sentence.tokens.empty()) sink(std::move(sentence));
}

}  // namespace

std::size_t extract_wikitext(
    std::string_view article, std::size_t max_phrase_len,
    const std::function<void(AnnotatedSentence)>& sink) {
  std::size_t warnings = 0;
  std::size_t pos = 0;
  while (pos <= article.size()) {
    std::size_t eol = article.find('\n', pos);
    if (eol == std::string_view::npos) eol = article.size();
    std::string_view line = article.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      sentence_from_line(line, max_phrase_len, warnings, sink);
    }
    if (eol == article.size()) break;
    pos = eol + 1;
  }
  return warnings;
}

WikitextExtraction extract_wikitext(std::string_view article,
                                    std::size_t max_phrase_len) {
  WikitextExtraction result;
  result.malformed_markup = extract_wikitext(
      article, max_phrase_len,
      [&](AnnotatedSentence s) { result.sentences.push_back(std::move(s)); });
  return result;
}

}  // namespace sphrase
