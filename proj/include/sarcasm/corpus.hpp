#pragma once

// Review ingestion, annotator label resolution, star segregation and seeded
// train/test/curriculum selection.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sarcasm {

struct Review {
  std::string review_id;
  int stars = 0;
  std::string text;
};

struct SarcasmLabel {
  std::string review_id;
  bool sarcastic = false;
  std::string annotator;
};

struct LabeledReview {
  Review review;
  bool sarcastic = false;
};

// A line that could not be turned into a record. Line numbers are 1-based.
struct ParseError {
  std::size_t line = 0;
  std::string reason;
};

template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<ParseError> errors;
};

inline constexpr int kNumStars = 5;
inline constexpr std::size_t kDefaultTrainSize = 700;
inline constexpr std::size_t kDefaultTestSize = 300;

// Reads JSON-lines review records (review_id, stars, text; extra fields
// ignored). Bad lines are collected, never fatal. Throws DataError if the
// stream is unreadable.
ParseResult<Review> parse_review_stream(std::istream& in);
ParseResult<Review> parse_review_file(const std::filesystem::path& path);

// Reads JSON-lines label records (review_id, sarcastic, annotator).
ParseResult<SarcasmLabel> parse_label_stream(std::istream& in);
ParseResult<SarcasmLabel> parse_label_file(const std::filesystem::path& path);

// Majority vote over distinct annotators; ties resolve to non-sarcastic.
// A repeated (review_id, annotator) pair keeps the last record.
std::map<std::string, bool> resolve_labels(std::span<const SarcasmLabel> labels);

struct LabelJoin {
  std::vector<LabeledReview> labeled;  // corpus order
  std::vector<std::string> unknown_ids;  // labels naming no review
  std::size_t unlabeled = 0;
};

LabelJoin attach_labels(std::span<const Review> reviews,
                        std::span<const SarcasmLabel> labels);

// Index 0 holds 1-star reviews, index 4 holds 5-star reviews.
using StarBuckets = std::array<std::vector<Review>, kNumStars>;
using LabeledStarBuckets = std::array<std::vector<LabeledReview>, kNumStars>;

StarBuckets segregate_by_stars(std::span<const Review> reviews);
LabeledStarBuckets segregate_by_stars(std::span<const LabeledReview> reviews);

struct DatasetSplit {
  int stars = 0;
  std::vector<LabeledReview> train;
  std::vector<LabeledReview> test;
  std::uint64_t seed = 0;
};

// Shuffles the pool with seeded Fisher-Yates, takes the first train_n as
// train and the next test_n as test. Throws DataError when the pool is short
// or mixes star ratings.
DatasetSplit make_split(std::span<const LabeledReview> pool, std::size_t train_n,
                        std::size_t test_n, std::uint64_t seed);

std::vector<LabeledReview> curriculum_subset(std::span<const LabeledReview> pool,
                                             bool want_sarcastic, std::size_t n,
                                             std::uint64_t seed);

// Split manifest: stars, seed, sizes and ordered review_id lists.
struct SplitManifest {
  int stars = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

SplitManifest manifest_of(const DatasetSplit& split);
void write_manifest(const SplitManifest& m, const std::filesystem::path& path);
SplitManifest read_manifest(const std::filesystem::path& path);

// Rebuilds a split from a manifest against a labeled corpus. Throws DataError
// if any listed id is missing.
DatasetSplit split_from_manifest(const SplitManifest& m,
                                 std::span<const LabeledReview> corpus);

}  // namespace sarcasm
