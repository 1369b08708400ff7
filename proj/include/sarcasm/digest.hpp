#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sarcasm {

// Incremental SHA-256, hex output.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view bytes);
  std::string hex();

 private:
  void* ctx_;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Whole-file read; throws DataError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace sarcasm
