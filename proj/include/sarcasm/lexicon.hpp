#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace sarcasm {

// Closed-class and feature wordlists. Each file is UTF-8, one lowercase entry
// per line; blank lines and lines starting with '#' are skipped.
enum class LexiconKind {
  Interjection,
  PersonalPronoun,
  PossessivePronoun,
  Determiner,
  Preposition,
  Conjunction,
  Invocation,
  Intensifier,
  Positive,
  Negative,
  SecondPerson,
  FirstPersonPlural,
};

inline constexpr std::size_t kNumLexicons = 12;

std::string_view lexicon_file_name(LexiconKind kind);

// Environment variable overriding the lexicon directory.
inline constexpr const char* kLexiconDirEnv = "SARCASM_LEXICON_DIR";

class Lexicons {
 public:
  // Loads all twelve files from dir; throws DataError if any is missing.
  static Lexicons load(const std::filesystem::path& dir);
  // $SARCASM_LEXICON_DIR if set, else the bundled data/lexicons.
  static std::filesystem::path default_dir();
  static Lexicons load_default() { return load(default_dir()); }

  bool contains(LexiconKind kind, std::string_view lowered) const;
  const std::unordered_set<std::string>& words(LexiconKind kind) const {
    return sets_[static_cast<std::size_t>(kind)];
  }

  // SHA-256 over every file's name and raw bytes, in enum order.
  const std::string& digest() const { return digest_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::array<std::unordered_set<std::string>, kNumLexicons> sets_;
  std::string digest_;
  std::filesystem::path dir_;
};

}  // namespace sarcasm
