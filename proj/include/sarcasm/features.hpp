#pragma once

// The 15-feature non-contextual sarcasm vector: catalog, raw counts,
// length normalization, and corpus-level extraction kernels.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sarcasm/corpus.hpp"
#include "sarcasm/lexicon.hpp"
#include "sarcasm/text_analysis.hpp"

namespace sarcasm {

inline constexpr std::size_t kNumFeatures = 15;

enum class FeatureCategory { Keyword, Punctuation, Orthographic, PersonReference };
enum class FeatureKind { Rate, Flag };

std::string_view to_string(FeatureCategory c);

struct FeatureDescriptor {
  std::string_view id;  // "f1".."f15"
  std::string_view name;
  FeatureCategory category;
  FeatureKind kind;
  std::string_view definition;
};

// Fixed, ordered catalog. Component i of every FeatureVector is catalog()[i].
std::span<const FeatureDescriptor, kNumFeatures> catalog();

struct FeatureCounts {
  std::array<std::uint32_t, kNumFeatures> values{};
  std::uint32_t word_count = 0;

  std::uint32_t operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureCounts&) const = default;
};

struct FeatureVector {
  std::array<double, kNumFeatures> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::span<const double, kNumFeatures> span() const { return values; }
  bool operator==(const FeatureVector&) const = default;
};

FeatureCounts extract_counts(std::span<const TaggedToken> tagged, const Lexicons& lex);

// Rates become min(1, count / word_count); flags pass through; a review with
// no words maps to the zero vector.
FeatureVector normalize(const FeatureCounts& counts);

// tokenize -> pos_tag -> extract_counts, bound to one lexicon set.
class FeaturePipeline {
 public:
  explicit FeaturePipeline(Lexicons lex) : lex_(std::move(lex)) {}

  const Lexicons& lexicons() const { return lex_; }

  // Throws DataError for malformed UTF-8.
  FeatureCounts counts(std::string_view text) const;
  FeatureVector vector(std::string_view text) const { return normalize(counts(text)); }

 private:
  Lexicons lex_;
};

// Per-review outcome of corpus extraction; failed reviews carry the reason.
struct CountsOutcome {
  std::optional<FeatureCounts> counts;
  std::string error;
  bool operator==(const CountsOutcome&) const = default;
};

// OpenMP parallel over reviews; output order follows input order.
std::vector<CountsOutcome> extract_all(const FeaturePipeline& pipeline,
                                       std::span<const std::string_view> texts);
// Single-threaded reference for extract_all.
std::vector<CountsOutcome> extract_all_serial(const FeaturePipeline& pipeline,
                                              std::span<const std::string_view> texts);

// Feature dump: provenance comment lines, then a CSV header
// "review_id,word_count,label,<15 catalog names>" and one row per review.
// Values carry 17 significant digits; label is 1, 0, or empty if unknown.
struct DumpRow {
  std::string review_id;
  std::optional<bool> label;
  std::string_view text;
};

// Returns the number of rows skipped because extraction failed.
std::size_t write_feature_dump(const FeaturePipeline& pipeline,
                               std::span<const DumpRow> rows,
                               const std::filesystem::path& path);

}  // namespace sarcasm
