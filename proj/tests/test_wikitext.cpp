#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "sphrase/rng.hpp"
#include "sphrase/wikitext.hpp"

using namespace sphrase;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

std::string random_markup(Rng& rng) {
  static const char* pieces[] = {
      "word",  "and",  "rome ", "new york ", "[[",    "]]",   "|",
      "{{",    "}}",   "''",    "'''",       "==",    "<ref>", "</ref>",
      "<!--",  "-->",  "\n",    " ",         "Category:", ":", "a b c "};
  std::string out;
  const std::size_t n = rng.uniform(60);
  for (std::size_t i = 0; i < n; ++i) {
    out += pieces[rng.uniform(std::size(pieces))];
  }
  return out;
}

std::vector<std::string> all_tokens(const WikitextExtraction& extraction) {
  std::vector<std::string> out;
  for (const AnnotatedSentence& s : extraction.sentences) {
    out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  }
  return out;
}

}  // namespace

TEST_CASE("piped link: display text becomes the phrase") {
  const auto r = extract_wikitext("flights to [[New York City|New York]] daily");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens ==
        toks({"flights", "to", "new", "york", "daily"}));
  REQUIRE(r.sentences[0].spans.size() == 1);
  CHECK(r.sentences[0].spans[0] == PhraseSpan{2, 4});
  CHECK(r.malformed_markup == 0);
}

TEST_CASE("one-token display text yields no span") {
  const auto r = extract_wikitext("[[Rome]] is old");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens == toks({"rome", "is", "old"}));
  CHECK(r.sentences[0].spans.empty());
}

TEST_CASE("multi-word link text becomes a phrase") {
  const auto r = extract_wikitext("met [[George W. Bush]] today");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens ==
        toks({"met", "george", "w.", "bush", "today"}));
  REQUIRE(r.sentences[0].spans.size() == 1);
  CHECK(r.sentences[0].spans[0] == PhraseSpan{1, 4});
}

TEST_CASE("category, file and image links are dropped entirely") {
  const auto r = extract_wikitext(
      "x [[Category:Towns in Italy]] y [[File:Map.png|thumb|A map]] z "
      "[[Image:Pic.jpg]] w");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens == toks({"x", "y", "z", "w"}));
  CHECK(r.sentences[0].spans.empty());
}

TEST_CASE("templates, tags, comments, quotes and headings are stripped") {
  CHECK(all_tokens(extract_wikitext("a {{cite|url={{x}}}} b")) ==
        toks({"a", "b"}));
  CHECK(all_tokens(extract_wikitext("a <ref name=\"r\">note</ref> b")) ==
        toks({"a", "note", "b"}));
  CHECK(all_tokens(extract_wikitext("a <!-- hidden --> b")) ==
        toks({"a", "b"}));
  CHECK(all_tokens(extract_wikitext("'''Rome''' is ''old''")) ==
        toks({"rome", "is", "old"}));
  CHECK(all_tokens(extract_wikitext("== History ==")) == toks({"history"}));
}

TEST_CASE("unclosed markup is literal text and counted") {
  const auto r = extract_wikitext("a [[broken link");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens == toks({"a", "broken", "link"}));
  CHECK(r.malformed_markup == 1);

  const auto t = extract_wikitext("a {{unclosed template");
  CHECK(all_tokens(t) == toks({"a", "unclosed", "template"}));
  CHECK(t.malformed_markup == 1);
}

TEST_CASE("over-long display text keeps tokens but no span") {
  const auto r = extract_wikitext(
      "see [[t|w1 w2 w3 w4 w5 w6 w7 w8 w9 w10 w11]] now");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens.size() == 13);
  CHECK(r.sentences[0].spans.empty());

  const auto ok = extract_wikitext("see [[t|w1 w2 w3]] now", 3);
  REQUIRE(ok.sentences.size() == 1);
  REQUIRE(ok.sentences[0].spans.size() == 1);
  const auto tight = extract_wikitext("see [[t|w1 w2 w3]] now", 2);
  CHECK(tight.sentences[0].spans.empty());
  CHECK(tight.sentences[0].tokens == ok.sentences[0].tokens);
}

TEST_CASE("nested links flatten to display text, outer link is the span") {
  const auto r = extract_wikitext("at [[a|b [[c|d]] e]] end");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens == toks({"at", "b", "d", "e", "end"}));
  REQUIRE(r.sentences[0].spans.size() == 1);
  CHECK(r.sentences[0].spans[0] == PhraseSpan{1, 4});
}

TEST_CASE("empty display text falls back to the target") {
  const auto r = extract_wikitext("see [[New York|]] now");
  REQUIRE(r.sentences.size() == 1);
  CHECK(r.sentences[0].tokens == toks({"see", "new", "york", "now"}));
  REQUIRE(r.sentences[0].spans.size() == 1);
}

TEST_CASE("sentences break at newlines") {
  const auto r = extract_wikitext("a b\nc [[d e]]\n\nf");
  REQUIRE(r.sentences.size() == 3);
  CHECK(r.sentences[0].tokens == toks({"a", "b"}));
  CHECK(r.sentences[1].spans.size() == 1);
  CHECK(r.sentences[2].tokens == toks({"f"}));
}

TEST_CASE("random markup never crashes and always yields valid sentences") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const auto r = extract_wikitext(random_markup(rng));
    for (const AnnotatedSentence& s : r.sentences) {
      std::string reason;
      CHECK_MESSAGE(validate_sentence(s, kDefaultMaxPhraseLen, &reason),
                    reason);
    }
  }
}

TEST_CASE("token stream does not depend on phrase eligibility") {
  Rng rng(78);
  for (int i = 0; i < 300; ++i) {
    const std::string markup = random_markup(rng);
    const auto narrow = extract_wikitext(markup, 2);
    const auto wide = extract_wikitext(markup, 10);
    REQUIRE(narrow.sentences.size() == wide.sentences.size());
    for (std::size_t s = 0; s < narrow.sentences.size(); ++s) {
      CHECK(narrow.sentences[s].tokens == wide.sentences[s].tokens);
    }
  }
}
