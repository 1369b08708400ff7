#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "sarcasm/errors.hpp"
#include "sarcasm/rng.hpp"
#include "sarcasm/text_analysis.hpp"
#include "test_support.hpp"

using namespace sarcasm;
using sarcasm::testing::bundled_lexicons;

namespace {

std::vector<std::pair<TokenKind, std::string>> shape(const std::vector<Token>& tokens) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : tokens) out.emplace_back(t.kind, t.surface);
  return out;
}

// Random text over a mixed alphabet, including multi-byte code points.
std::string random_text(Rng& rng) {
  static const std::array<std::string, 24> kPieces = {
      "a", "Z", "e", "h", "ha", "'", "\xE2\x80\x99", "7", " ", " ", "!", "?", ".", "..",
      "\xE2\x80\xA6", ",", "-", "\xC3\xA9", "\xCE\xA9", "\xE4\xB8\xAD", "\xF0\x9F\x98\x80",
      "\n", "#", "SO"};
  std::string s;
  const auto len = uniform_below(rng, 40);
  for (std::uint64_t i = 0; i < len; ++i) s += kPieces[uniform_below(rng, kPieces.size())];
  return s;
}

}  // namespace

TEST_SUITE("tokenize") {
  TEST_CASE("sarcastic fixture") {
    auto t = tokenize("God! Aren't we clever??");
    using K = TokenKind;
    std::vector<std::pair<K, std::string>> expected = {
        {K::Word, "God"},    {K::PunctRun, "!"},    {K::Word, "Aren't"},
        {K::Word, "we"},     {K::Word, "clever"},   {K::PunctRun, "??"}};
    CHECK(shape(t) == expected);
    CHECK(t[0].span == Span{0, 3});
    CHECK(t[5].span == Span{21, 23});
  }

  TEST_CASE("empty and delimiter-only text") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("  , - .. 123 '' ").empty());
  }

  TEST_CASE("ellipsis between words") {
    using K = TokenKind;
    std::vector<std::pair<K, std::string>> expected = {
        {K::Word, "so"}, {K::Ellipsis, "..."}, {K::Word, "good"}};
    CHECK(shape(tokenize("so...good")) == expected);
  }

  TEST_CASE("ellipsis forms") {
    using K = TokenKind;
    auto t = tokenize("wait.....what\xE2\x80\xA6ok..no");
    std::vector<std::pair<K, std::string>> expected = {
        {K::Word, "wait"}, {K::Ellipsis, "....."}, {K::Word, "what"},
        {K::Ellipsis, "\xE2\x80\xA6"}, {K::Word, "ok"}, {K::Word, "no"}};
    CHECK(shape(t) == expected);
  }

  TEST_CASE("mixed punctuation run stays whole") {
    auto t = tokenize("really?!?!");
    REQUIRE(t.size() == 2);
    CHECK(t[1].surface == "?!?!");
    CHECK(t[1].kind == TokenKind::PunctRun);
  }

  TEST_CASE("unicode letters, digits and curly apostrophes") {
    auto t = tokenize("caf\xC3\xA9 4ever can\xE2\x80\x99t 2020 \xCE\xA9mega");
    REQUIRE(t.size() == 4);
    CHECK(t[0].surface == "caf\xC3\xA9");
    CHECK(t[1].surface == "4ever");
    CHECK(t[2].surface == "can\xE2\x80\x99t");
    CHECK(t[3].surface == "\xCE\xA9mega");
  }

  TEST_CASE("malformed UTF-8 is rejected") {
    CHECK_FALSE(valid_utf8("bad \xC3"));
    CHECK(valid_utf8("ok \xC3\xA9"));
    CHECK_THROWS_AS(tokenize("bad \xFF byte"), DataError);
  }

  TEST_CASE("properties over a 10,000-string fuzz corpus") {
    Rng rng(2024);
    const auto& lex = bundled_lexicons();
    for (int n = 0; n < 10000; ++n) {
      const std::string text = random_text(rng);
      const auto tokens = tokenize(text);
      // span coverage: gaps plus tokens rebuild the text
      std::string rebuilt;
      std::size_t pos = 0;
      for (const auto& t : tokens) {
        REQUIRE(t.span.start >= pos);
        REQUIRE(t.span.end > t.span.start);
        REQUIRE(text.substr(t.span.start, t.span.end - t.span.start) == t.surface);
        rebuilt += text.substr(pos, t.span.start - pos);
        rebuilt += t.surface;
        pos = t.span.end;
      }
      rebuilt += text.substr(pos);
      REQUIRE(rebuilt == text);

      for (const auto& t : tokens) {
        REQUIRE_FALSE(t.surface.empty());
        if (t.kind == TokenKind::PunctRun)
          REQUIRE(t.surface.find_first_not_of("!?") == std::string::npos);
        if (t.kind == TokenKind::Ellipsis)
          REQUIRE((t.surface == "\xE2\x80\xA6" ||
                   (t.surface.size() >= 3 &&
                    t.surface.find_first_not_of('.') == std::string::npos)));
      }
      // purity and tag totality
      REQUIRE(tokenize(text) == tokens);
      const auto tagged = pos_tag(tokens, lex);
      REQUIRE(tagged.size() == tokens.size());
      REQUIRE(pos_tag(tokens, lex) == tagged);
      for (const auto& tt : tagged)
        if (tt.token.kind != TokenKind::Word) REQUIRE(tt.tag == PosTag::OTHER);
    }
  }
}

TEST_SUITE("pos_tag") {
  const auto& lex = bundled_lexicons();

  TEST_CASE("fixtures") {
    CHECK(tag_word("we", lex) == PosTag::PRP);
    CHECK(tag_word(lowercase("Haha"), lex) == PosTag::UH);
    CHECK(tag_word("frob", lex) == PosTag::NN);
  }

  TEST_CASE("interjections") {
    for (const char* w : {"haha", "hahaha", "hahah", "lol", "wow", "oh", "yay", "ugh", "huh",
                          "meh", "woohoo"})
      CHECK_MESSAGE(tag_word(w, lex) == PosTag::UH, w);
    CHECK(tag_word("ha", lex) != PosTag::UH);
    CHECK(tag_word("hah", lex) != PosTag::UH);
    CHECK(tag_word("hat", lex) == PosTag::NN);
  }

  TEST_CASE("closed classes") {
    CHECK(tag_word("our", lex) == PosTag::PRPS);
    CHECK(tag_word("the", lex) == PosTag::DT);
    CHECK(tag_word("with", lex) == PosTag::IN);
    CHECK(tag_word("and", lex) == PosTag::CC);
    CHECK(tag_word("i'm", lex) == PosTag::PRP);
  }

  TEST_CASE("suffix rules") {
    CHECK(tag_word("quickly", lex) == PosTag::RB);
    CHECK(tag_word("trying", lex) == PosTag::VB);
    CHECK(tag_word("waited", lex) == PosTag::VB);
    CHECK(tag_word("famous", lex) == PosTag::JJ);
    CHECK(tag_word("hopeful", lex) == PosTag::JJ);
    CHECK(tag_word("massive", lex) == PosTag::JJ);
    CHECK(tag_word("useless", lex) == PosTag::JJ);
    CHECK(tag_word("ly", lex) == PosTag::NN);
    CHECK(tag_word("bed", lex) == PosTag::NN);
  }

  TEST_CASE("tagging uses the lowercased surface") {
    auto tagged = pos_tag(tokenize("WE Haha HAHAHA !!"), lex);
    REQUIRE(tagged.size() == 4);
    CHECK(tagged[0].tag == PosTag::PRP);
    CHECK(tagged[1].tag == PosTag::UH);
    CHECK(tagged[2].tag == PosTag::UH);
    CHECK(tagged[3].tag == PosTag::OTHER);
  }

  TEST_CASE("unicode lowercase") {
    CHECK(lowercase("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");
    CHECK(lowercase("Aren't") == "aren't");
  }
}

TEST_CASE("lexicon files load and skip comments") {
  sarcasm::testing::TempDir dir;
  for (std::size_t i = 0; i < kNumLexicons; ++i)
    sarcasm::testing::write_file(dir / std::string(lexicon_file_name(static_cast<LexiconKind>(i))),
                                 "# comment\n\nfoo\n  bar  \n");
  auto lex = Lexicons::load(dir.path());
  CHECK(lex.contains(LexiconKind::Positive, "foo"));
  CHECK(lex.contains(LexiconKind::Positive, "bar"));
  CHECK_FALSE(lex.contains(LexiconKind::Positive, "# comment"));
  CHECK(lex.words(LexiconKind::Negative).size() == 2);

  std::filesystem::remove(dir / "negative.txt");
  CHECK_THROWS_AS(Lexicons::load(dir.path()), DataError);
}
