#include "sarcasm/features.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "sarcasm/errors.hpp"

namespace sarcasm {

namespace {

using enum FeatureCategory;
using enum FeatureKind;

constexpr std::array<FeatureDescriptor, kNumFeatures> kCatalog = {{
    {"f1", "interjection_rate", Keyword, Rate, "UH-tagged words per word"},
    {"f2", "invocation_rate", Keyword, Rate, "invocation lexicon words (god, gosh, geez, ...) per word"},
    {"f3", "intensifier_rate", Keyword, Rate, "intensifier lexicon words (so, really, totally, ...) per word"},
    {"f4", "positive_word_rate", Keyword, Rate, "positive-sentiment lexicon words per word"},
    {"f5", "negative_word_rate", Keyword, Rate, "negative-sentiment lexicon words per word"},
    {"f6", "sentiment_contrast", Keyword, Flag, "1 if both positive and negative words occur"},
    {"f7", "multi_exclamation_rate", Punctuation, Rate, "runs of two or more '!' per word"},
    {"f8", "multi_question_rate", Punctuation, Rate, "runs of two or more '?' per word"},
    {"f9", "mixed_punct_rate", Punctuation, Rate, "runs mixing '!' and '?' per word"},
    {"f10", "ellipsis_rate", Punctuation, Rate, "ellipses per word"},
    {"f11", "single_exclamation_rate", Punctuation, Rate, "lone '!' runs per word"},
    {"f12", "all_caps_rate", Orthographic, Rate, "words of two or more letters, all uppercase, per word"},
    {"f13", "elongated_rate", Orthographic, Rate, "words with a letter repeated three times in a row per word"},
    {"f14", "second_person_rate", PersonReference, Rate, "you/your/yours/u per word"},
    {"f15", "first_person_plural_rate", PersonReference, Rate, "we/us/our/ours per word"},
}};

enum Index : std::size_t {
  kInterjection, kInvocation, kIntensifier, kPositive, kNegative, kContrast,
  kMultiExclaim, kMultiQuestion, kMixed, kEllipsisRate, kSingleExclaim,
  kAllCaps, kElongated, kSecondPerson, kFirstPlural,
};

// Returns {letters, all letters uppercase, has a triple repeat}.
struct Shape {
  std::size_t letters = 0;
  bool all_upper = true;
  bool elongated = false;
};

Shape word_shape(std::string_view w) {
  Shape s;
  const auto* p = reinterpret_cast<const uint8_t*>(w.data());
  const auto len = static_cast<int32_t>(w.size());
  int32_t i = 0;
  UChar32 prev = -1;
  int run = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0 || !u_isUAlphabetic(c)) {
      prev = -1;
      run = 0;
      continue;
    }
    ++s.letters;
    if (!u_isUUppercase(c)) s.all_upper = false;
    const UChar32 folded = u_tolower(c);
    run = (folded == prev) ? run + 1 : 1;
    prev = folded;
    if (run >= 3) s.elongated = true;
  }
  return s;
}

}  // namespace

std::string_view to_string(FeatureCategory c) {
  switch (c) {
    case Keyword: return "Keyword";
    case Punctuation: return "Punctuation";
    case Orthographic: return "Orthographic";
    case PersonReference: return "PersonReference";
  }
  return "?";
}

std::span<const FeatureDescriptor, kNumFeatures> catalog() { return kCatalog; }

FeatureCounts extract_counts(std::span<const TaggedToken> tagged, const Lexicons& lex) {
  FeatureCounts c;
  auto& v = c.values;
  for (const auto& tt : tagged) {
    const std::string& s = tt.token.surface;
    switch (tt.token.kind) {
      case TokenKind::Word: {
        ++c.word_count;
        if (tt.tag == PosTag::UH) ++v[kInterjection];
        const std::string low = lowercase(s);
        if (lex.contains(LexiconKind::Invocation, low)) ++v[kInvocation];
        if (lex.contains(LexiconKind::Intensifier, low)) ++v[kIntensifier];
        if (lex.contains(LexiconKind::Positive, low)) ++v[kPositive];
        if (lex.contains(LexiconKind::Negative, low)) ++v[kNegative];
        if (lex.contains(LexiconKind::SecondPerson, low)) ++v[kSecondPerson];
        if (lex.contains(LexiconKind::FirstPersonPlural, low)) ++v[kFirstPlural];
        const Shape shape = word_shape(s);
        if (shape.letters >= 2 && shape.all_upper) ++v[kAllCaps];
        if (shape.elongated) ++v[kElongated];
        break;
      }
      case TokenKind::PunctRun: {
        const bool bang = s.find('!') != std::string::npos;
        const bool question = s.find('?') != std::string::npos;
        if (bang && question) ++v[kMixed];
        else if (bang && s.size() >= 2) ++v[kMultiExclaim];
        else if (question && s.size() >= 2) ++v[kMultiQuestion];
        else if (bang) ++v[kSingleExclaim];
        break;
      }
      case TokenKind::Ellipsis:
        ++v[kEllipsisRate];
        break;
    }
  }
  v[kContrast] = (v[kPositive] > 0 && v[kNegative] > 0) ? 1 : 0;
  return c;
}

FeatureVector normalize(const FeatureCounts& counts) {
  FeatureVector x;
  if (counts.word_count == 0) return x;
  const double words = counts.word_count;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const double raw = counts.values[i];
    x[i] = kCatalog[i].kind == Flag ? raw : std::min(1.0, raw / words);
  }
  return x;
}

FeatureCounts FeaturePipeline::counts(std::string_view text) const {
  const auto tokens = tokenize(text);
  const auto tagged = pos_tag(tokens, lex_);
  return extract_counts(tagged, lex_);
}

namespace {

CountsOutcome count_one(const FeaturePipeline& pipeline, std::string_view text) {
  try {
    return {pipeline.counts(text), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace

std::vector<CountsOutcome> extract_all(const FeaturePipeline& pipeline,
                                       std::span<const std::string_view> texts) {
  std::vector<CountsOutcome> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = count_one(pipeline, texts[i]);
  return out;
}

std::vector<CountsOutcome> extract_all_serial(const FeaturePipeline& pipeline,
                                              std::span<const std::string_view> texts) {
  std::vector<CountsOutcome> out;
  out.reserve(texts.size());
  for (auto t : texts) out.push_back(count_one(pipeline, t));
  return out;
}

namespace {

// RFC 4180 quoting for ids that would break the row.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::size_t write_feature_dump(const FeaturePipeline& pipeline,
                               std::span<const DumpRow> rows,
                               const std::filesystem::path& path) {
  std::vector<std::string_view> texts;
  texts.reserve(rows.size());
  for (const auto& r : rows) texts.push_back(r.text);
  const auto outcomes = extract_all(pipeline, texts);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# sarcasm feature dump v1\n";
  out << "# lexicon_digest=" << pipeline.lexicons().digest() << '\n';
  out << "review_id,word_count,label";
  for (const auto& d : kCatalog) out << ',' << d.name;
  out << '\n';

  std::size_t skipped = 0;
  char buf[32];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!outcomes[i].counts) {
      ++skipped;
      continue;
    }
    const auto& c = *outcomes[i].counts;
    const FeatureVector x = normalize(c);
    out << csv_field(rows[i].review_id) << ',' << c.word_count << ',';
    if (rows[i].label) out << (*rows[i].label ? '1' : '0');
    for (double v : x.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
  return skipped;
}

}  // namespace sarcasm
