#include "sarcasm/text_analysis.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <array>
#include <cstdint>
#include <utility>

#include "sarcasm/errors.hpp"

namespace sarcasm {

namespace {

constexpr UChar32 kEllipsis = 0x2026;
constexpr UChar32 kRightSingleQuote = 0x2019;

bool is_letter(UChar32 c) { return u_isUAlphabetic(c); }
bool is_apostrophe(UChar32 c) { return c == '\'' || c == kRightSingleQuote; }
bool is_word_char(UChar32 c) { return is_letter(c) || u_isdigit(c) || is_apostrophe(c); }
bool is_punct(UChar32 c) { return c == '!' || c == '?'; }

// Decodes the code point at byte offset i, advancing i. Returns a negative
// value for ill-formed input.
UChar32 next_cp(std::string_view s, std::size_t& i) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());
  auto pos = static_cast<int32_t>(i);
  UChar32 c;
  U8_NEXT(p, pos, len, c);
  i = static_cast<std::size_t>(pos);
  return c;
}

bool is_repeated_ha(std::string_view w) {
  if (!w.empty() && w.back() == 'h') w.remove_suffix(1);
  if (w.size() < 4 || w.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < w.size(); i += 2)
    if (w[i] != 'h' || w[i + 1] != 'a') return false;
  return true;
}

bool has_suffix(std::string_view w, std::string_view suffix) {
  // Require a stem of at least two bytes.
  return w.size() >= suffix.size() + 2 && w.ends_with(suffix);
}

}  // namespace

std::string_view to_string(PosTag tag) {
  static constexpr std::array<std::string_view, 11> kNames = {
      "UH", "PRP", "PRP$", "JJ", "RB", "VB", "NN", "DT", "IN", "CC", "OTHER"};
  return kNames[static_cast<std::size_t>(tag)];
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "Word";
    case TokenKind::PunctRun: return "PunctRun";
    case TokenKind::Ellipsis: return "Ellipsis";
  }
  return "?";
}

bool valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size())
    if (next_cp(text, i) < 0) return false;
  return true;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto emit = [&](std::size_t start, std::size_t end, TokenKind kind) {
    tokens.push_back({std::string(text.substr(start, end - start)), kind, {start, end}});
  };

  while (i < text.size()) {
    const std::size_t start = i;
    const UChar32 c = next_cp(text, i);
    if (c < 0) throw DataError("malformed UTF-8 at byte " + std::to_string(start));

    if (is_word_char(c)) {
      bool letter = is_letter(c);
      std::size_t end = i;
      while (end < text.size()) {
        std::size_t j = end;
        const UChar32 d = next_cp(text, j);
        if (d < 0) throw DataError("malformed UTF-8 at byte " + std::to_string(end));
        if (!is_word_char(d)) break;
        letter = letter || is_letter(d);
        end = j;
      }
      if (letter) emit(start, end, TokenKind::Word);
      i = end;
    } else if (is_punct(c)) {
      std::size_t end = i;
      while (end < text.size() && (text[end] == '!' || text[end] == '?')) ++end;
      emit(start, end, TokenKind::PunctRun);
      i = end;
    } else if (c == '.') {
      std::size_t end = i;
      while (end < text.size() && text[end] == '.') ++end;
      if (end - start >= 3) emit(start, end, TokenKind::Ellipsis);
      i = end;
    } else if (c == kEllipsis) {
      emit(start, i, TokenKind::Ellipsis);
    }
  }
  return tokens;
}

std::string lowercase(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  std::size_t i = 0;
  while (i < word.size()) {
    const std::size_t start = i;
    UChar32 c = next_cp(word, i);
    if (c < 0) {
      out.append(word.substr(start, i - start));
      continue;
    }
    c = u_tolower(c);
    std::array<uint8_t, U8_MAX_LENGTH> buf{};
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf.data(), n, c);
    out.append(reinterpret_cast<const char*>(buf.data()), static_cast<std::size_t>(n));
  }
  return out;
}

PosTag tag_word(std::string_view lowered, const Lexicons& lex) {
  if (is_repeated_ha(lowered) || lex.contains(LexiconKind::Interjection, lowered))
    return PosTag::UH;

  static constexpr std::array<std::pair<LexiconKind, PosTag>, 5> kClosed = {{
      {LexiconKind::PersonalPronoun, PosTag::PRP},
      {LexiconKind::PossessivePronoun, PosTag::PRPS},
      {LexiconKind::Determiner, PosTag::DT},
      {LexiconKind::Preposition, PosTag::IN},
      {LexiconKind::Conjunction, PosTag::CC},
  }};
  for (const auto& [kind, tag] : kClosed)
    if (lex.contains(kind, lowered)) return tag;

  if (has_suffix(lowered, "ly")) return PosTag::RB;
  if (has_suffix(lowered, "ing") || has_suffix(lowered, "ed")) return PosTag::VB;
  for (std::string_view s : {"ous", "ful", "ive", "less"})
    if (has_suffix(lowered, s)) return PosTag::JJ;
  return PosTag::NN;
}

std::vector<TaggedToken> pos_tag(std::span<const Token> tokens, const Lexicons& lex) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const PosTag tag =
        t.kind == TokenKind::Word ? tag_word(lowercase(t.surface), lex) : PosTag::OTHER;
    out.push_back({t, tag});
  }
  return out;
}

}  // namespace sarcasm
