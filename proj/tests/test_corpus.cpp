#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "sphrase/corpus.hpp"
#include "sphrase/errors.hpp"
#include "sphrase/rng.hpp"

using namespace sphrase;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

// Random sentence with bracket-safe tokens and valid spans.
AnnotatedSentence random_sentence(Rng& rng, std::size_t max_len = 20) {
  static const char* words[] = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                "zeta",  "eta",   "theta", "iota",  "kappa",
                                "w.",    "don't", "a-b",   "x1"};
  AnnotatedSentence s;
  const std::size_t n = 1 + rng.uniform(max_len);
  for (std::size_t i = 0; i < n; ++i) {
    s.tokens.push_back(words[rng.uniform(std::size(words))]);
  }
  std::size_t pos = 0;
  while (pos + 2 <= n) {
    if (rng.uniform(3) == 0) {
      const std::size_t len =
          2 + rng.uniform(std::min<std::size_t>(n - pos - 1, 9));
      s.spans.push_back({pos, pos + len});
      pos += len;
    } else {
      ++pos;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("tokenize splits, lowercases and strips outer punctuation") {
  CHECK(tokenize("British airways to Rome") ==
        toks({"british", "airways", "to", "rome"}));
  CHECK(tokenize("").empty());
  CHECK(tokenize("George W. Bush!") == toks({"george", "w.", "bush"}));
}

TEST_CASE("tokenize handles punctuation-only and unicode input") {
  CHECK(tokenize("foo --- bar") == toks({"foo", "bar"}));
  CHECK(tokenize("wait ... what?") == toks({"wait", "what"}));
  CHECK(tokenize("\"quoted\" (parens) [brackets]") ==
        toks({"quoted", "parens", "brackets"}));
  // U+00A0 no-break space separates, U+201C/U+201D quotes are stripped.
  CHECK(tokenize("a\xC2\xA0"
                 "b") == toks({"a", "b"}));
  CHECK(tokenize("\xE2\x80\x9Chello\xE2\x80\x9D") == toks({"hello"}));
  CHECK(tokenize("caf\xC3\xA9!") == toks({"caf\xC3\xA9"}));
  CHECK(tokenize("100% $5 c++") == toks({"100", "5", "c"}));
}

TEST_CASE("normalize_token keeps internal characters") {
  CHECK(normalize_token("don't") == "don't");
  CHECK(normalize_token("U.S.") == "u.s.");
  CHECK(normalize_token("--") == "");
  CHECK(normalize_token("...") == "");
}

TEST_CASE("parse_bracket_line reads phrases") {
  const auto s =
      parse_bracket_line("british airways to [ new york ] has departed");
  CHECK(s.tokens == toks({"british", "airways", "to", "new", "york", "has",
                          "departed"}));
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0] == PhraseSpan{3, 5});
}

TEST_CASE("parse_bracket_line without brackets") {
  const auto s = parse_bracket_line("plain sentence");
  CHECK(s.tokens == toks({"plain", "sentence"}));
  CHECK(s.spans.empty());
}

TEST_CASE("parse_bracket_line unwraps one-token phrases") {
  const auto s = parse_bracket_line("[ a ] b");
  CHECK(s.tokens == toks({"a", "b"}));
  CHECK(s.spans.empty());
}

TEST_CASE("parse_bracket_line drops spans longer than max_phrase_len") {
  const auto s = parse_bracket_line("[ a b c ] d", 0, 2);
  CHECK(s.tokens == toks({"a", "b", "c", "d"}));
  CHECK(s.spans.empty());
}

TEST_CASE("parse_bracket_line rejects malformed annotation") {
  CHECK_THROWS_AS(parse_bracket_line("[ a b"), MalformedAnnotation);
  CHECK_THROWS_AS(parse_bracket_line("a ] b"), MalformedAnnotation);
  CHECK_THROWS_AS(parse_bracket_line("[ a [ b ] ]"), MalformedAnnotation);
  try {
    parse_bracket_line("[ a [ b ] ]", 17);
    FAIL("expected MalformedAnnotation");
  } catch (const MalformedAnnotation& e) {
    const std::string msg = e.what();
    CHECK(msg.find("17") != std::string::npos);
    CHECK(msg.find("[ a [ b ] ]") != std::string::npos);
  }
}

TEST_CASE("bracket format round-trips") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const AnnotatedSentence s = random_sentence(rng);
    REQUIRE(validate_sentence(s));
    const AnnotatedSentence back = parse_bracket_line(to_bracket_line(s));
    CHECK(back == s);
  }
}

TEST_CASE("read_bracket_corpus streams non-empty sentences") {
  std::istringstream in("a b\n\n[ c d ] e\r\n");
  std::vector<AnnotatedSentence> got;
  read_bracket_corpus(in, [&](AnnotatedSentence s) { got.push_back(std::move(s)); });
  REQUIRE(got.size() == 2);
  CHECK(got[0].tokens == toks({"a", "b"}));
  CHECK(got[1].spans.size() == 1);
}

TEST_CASE("corpus_stats counts phrase tokens by length") {
  AnnotatedSentence s;
  s.tokens = toks({"t0", "t1", "t2", "t3", "t4", "t5", "t6"});
  s.spans = {{3, 5}};
  const CorpusStats stats = corpus_stats({s});
  CHECK(stats.sentences == 1);
  CHECK(stats.tokens == 7);
  CHECK(stats.phrase_tokens_by_len.at(2) == 2);
  CHECK(stats.proportion(2) == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("corpus_stats on an empty stream") {
  const CorpusStats stats = corpus_stats({});
  CHECK(stats.sentences == 0);
  CHECK(stats.tokens == 0);
  CHECK(stats.phrase_tokens_by_len.empty());
  CHECK(stats.proportion(2) == 0.0);
}

TEST_CASE("corpus_stats hand-counted proportions") {
  // 3 sentences, one length-3 span each, 30 tokens total.
  std::vector<AnnotatedSentence> corpus;
  for (int k = 0; k < 3; ++k) {
    AnnotatedSentence s;
    for (int i = 0; i < 10; ++i) s.tokens.push_back("w" + std::to_string(i));
    s.spans = {{4, 7}};
    corpus.push_back(std::move(s));
  }
  const CorpusStats stats = corpus_stats(corpus);
  CHECK(stats.tokens == 30);
  CHECK(stats.phrase_tokens_by_len.at(3) == 9);
  CHECK(stats.proportion(3) == doctest::Approx(0.3));
}

TEST_CASE("stats report is key<TAB>value lines") {
  AnnotatedSentence s;
  s.tokens = toks({"a", "b", "c"});
  s.spans = {{0, 2}};
  std::ostringstream out;
  write_stats_report(corpus_stats({s}), out, 3);
  CHECK(out.str() ==
        "sentences\t1\n"
        "tokens\t3\n"
        "phrase_tokens_2\t2\n"
        "phrase_token_share_2\t0.666667\n"
        "phrase_tokens_3\t0\n"
        "phrase_token_share_3\t0\n");
}

TEST_CASE("validate_sentence rejects invariant violations") {
  AnnotatedSentence s;
  s.tokens = toks({"a", "b", "c"});
  CHECK(validate_sentence(s));
  s.spans = {{0, 1}};
  CHECK_FALSE(validate_sentence(s));  // too short
  s.spans = {{1, 4}};
  CHECK_FALSE(validate_sentence(s));  // out of bounds
  s.spans = {{0, 2}, {1, 3}};
  CHECK_FALSE(validate_sentence(s));  // overlap
  s.spans = {};
  s.tokens.push_back("has space");
  CHECK_FALSE(validate_sentence(s));
}
