#include "sarcasm/lexicon.hpp"

#include <cstdlib>
#include <sstream>

#include "sarcasm/digest.hpp"
#include "sarcasm/errors.hpp"

namespace sarcasm {

namespace {

constexpr std::array<std::string_view, kNumLexicons> kFileNames = {
    "interjections.txt",   "personal_pronouns.txt", "possessive_pronouns.txt",
    "determiners.txt",     "prepositions.txt",      "conjunctions.txt",
    "invocations.txt",     "intensifiers.txt",      "positive.txt",
    "negative.txt",        "second_person.txt",     "first_person_plural.txt",
};

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view lexicon_file_name(LexiconKind kind) {
  return kFileNames[static_cast<std::size_t>(kind)];
}

std::filesystem::path Lexicons::default_dir() {
  if (const char* env = std::getenv(kLexiconDirEnv); env && *env) return env;
  return std::filesystem::path(SARCASM_DEFAULT_DATA_DIR) / "lexicons";
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
  Lexicons lex;
  lex.dir_ = dir;
  Sha256 hash;
  for (std::size_t i = 0; i < kNumLexicons; ++i) {
    const auto path = dir / std::string(kFileNames[i]);
    std::string bytes = read_file(path);
    hash.update(kFileNames[i]).update(std::string_view("\0", 1)).update(bytes);
    hash.update(std::to_string(bytes.size())).update(std::string_view("\0", 1));
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
      std::string entry = trim(line);
      if (entry.empty() || entry.front() == '#') continue;
      lex.sets_[i].insert(std::move(entry));
    }
  }
  lex.digest_ = hash.hex();
  return lex;
}

bool Lexicons::contains(LexiconKind kind, std::string_view lowered) const {
  const auto& set = sets_[static_cast<std::size_t>(kind)];
  return set.find(std::string(lowered)) != set.end();
}

}  // namespace sarcasm
