#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "sarcasm/corpus.hpp"
#include "sarcasm/lexicon.hpp"

namespace sarcasm::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "sarcasm") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline const Lexicons& bundled_lexicons() {
  static const Lexicons lex =
      Lexicons::load(std::filesystem::path(SARCASM_DEFAULT_DATA_DIR) / "lexicons");
  return lex;
}

inline std::filesystem::path minicorpus_dir() {
  return std::filesystem::path(SARCASM_DEFAULT_DATA_DIR) / "minicorpus";
}

// n single-star labeled reviews with ids "<prefix><i>", every k-th sarcastic.
inline std::vector<LabeledReview> make_pool(std::size_t n, int stars = 1,
                                            std::size_t sarcastic_every = 2,
                                            const std::string& prefix = "r") {
  std::vector<LabeledReview> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pool.push_back({{prefix + std::to_string(i), stars, "text " + std::to_string(i)},
                    sarcastic_every != 0 && i % sarcastic_every == 0});
  return pool;
}

}  // namespace sarcasm::testing
