#pragma once

// Tokenizer and lexicon/suffix POS tagger.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sarcasm/lexicon.hpp"

namespace sarcasm {

enum class TokenKind { Word, PunctRun, Ellipsis };

struct Span {
  std::size_t start = 0;  // byte offsets, half-open
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::Word;
  Span span;
  bool operator==(const Token&) const = default;
};

enum class PosTag { UH, PRP, PRPS, JJ, RB, VB, NN, DT, IN, CC, OTHER };

std::string_view to_string(PosTag tag);
std::string_view to_string(TokenKind kind);

struct TaggedToken {
  Token token;
  PosTag tag = PosTag::OTHER;
  bool operator==(const TaggedToken&) const = default;
};

// True if text is well-formed UTF-8.
bool valid_utf8(std::string_view text);

// Splits text into Words (letters/digits/apostrophes with at least one
// letter), PunctRuns ('!' and '?') and Ellipses (three or more '.' or U+2026).
// Everything else is a delimiter. Throws DataError on malformed UTF-8.
std::vector<Token> tokenize(std::string_view text);

// Unicode simple lowercase mapping, code point by code point.
std::string lowercase(std::string_view word);

// Tag priority: repeated-"ha" or interjection lexicon, closed-class lexicons,
// suffix rules, NN. Non-word tokens get OTHER.
PosTag tag_word(std::string_view lowered, const Lexicons& lex);
std::vector<TaggedToken> pos_tag(std::span<const Token> tokens, const Lexicons& lex);

}  // namespace sarcasm
