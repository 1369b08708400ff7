#include "sarcasm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sarcasm/errors.hpp"
#include "sarcasm/rng.hpp"

namespace sarcasm {

using nlohmann::json;

namespace {

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  });
}

// Returns an empty string on success, else the reason.
std::string review_from_json(const json& j, Review& out) {
  if (!j.is_object()) return "record is not an object";
  auto id = j.find("review_id");
  if (id == j.end()) return "missing field review_id";
  if (!id->is_string() || id->get_ref<const std::string&>().empty())
    return "review_id must be a non-empty string";
  auto stars = j.find("stars");
  if (stars == j.end()) return "missing field stars";
  if (!stars->is_number()) return "stars must be a number";
  double s = stars->get<double>();
  if (s != std::floor(s)) return "stars must be an integer";
  if (s < 1 || s > kNumStars) return "stars out of range";
  auto text = j.find("text");
  if (text == j.end()) return "missing field text";
  if (!text->is_string()) return "text must be a string";
  if (is_blank(text->get_ref<const std::string&>())) return "text is empty";
  out.review_id = id->get<std::string>();
  out.stars = static_cast<int>(s);
  out.text = text->get<std::string>();
  return {};
}

std::string label_from_json(const json& j, SarcasmLabel& out) {
  if (!j.is_object()) return "record is not an object";
  auto id = j.find("review_id");
  if (id == j.end()) return "missing field review_id";
  if (!id->is_string() || id->get_ref<const std::string&>().empty())
    return "review_id must be a non-empty string";
  auto sarcastic = j.find("sarcastic");
  if (sarcastic == j.end()) return "missing field sarcastic";
  if (!sarcastic->is_boolean()) return "sarcastic must be a boolean";
  auto annotator = j.find("annotator");
  if (annotator == j.end()) return "missing field annotator";
  if (!annotator->is_string() || annotator->get_ref<const std::string&>().empty())
    return "annotator must be a non-empty string";
  out.review_id = id->get<std::string>();
  out.sarcastic = sarcastic->get<bool>();
  out.annotator = annotator->get<std::string>();
  return {};
}

template <typename T, typename Convert, typename Check>
ParseResult<T> parse_lines(std::istream& in, Convert convert, Check check) {
  if (!in.good()) throw DataError("input stream is not readable");
  ParseResult<T> result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      result.errors.push_back({lineno, "malformed JSON"});
      continue;
    }
    T rec;
    std::string reason = convert(j, rec);
    if (reason.empty()) reason = check(rec);
    if (!reason.empty()) {
      result.errors.push_back({lineno, std::move(reason)});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (in.bad()) throw DataError("I/O error while reading input stream");
  return result;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void check_single_star(std::span<const LabeledReview> pool) {
  if (pool.empty()) return;
  const int s = pool.front().review.stars;
  for (const auto& r : pool)
    if (r.review.stars != s)
      throw DataError("pool mixes star ratings " + std::to_string(s) + " and " +
                      std::to_string(r.review.stars));
}

}  // namespace

ParseResult<Review> parse_review_stream(std::istream& in) {
  std::unordered_set<std::string> seen;
  return parse_lines<Review>(in, review_from_json, [&](const Review& r) {
    if (!seen.insert(r.review_id).second)
      return std::string("duplicate review_id ") + r.review_id;
    return std::string();
  });
}

ParseResult<Review> parse_review_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_review_stream(in);
}

ParseResult<SarcasmLabel> parse_label_stream(std::istream& in) {
  return parse_lines<SarcasmLabel>(in, label_from_json,
                                   [](const SarcasmLabel&) { return std::string(); });
}

ParseResult<SarcasmLabel> parse_label_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_label_stream(in);
}

std::map<std::string, bool> resolve_labels(std::span<const SarcasmLabel> labels) {
  // review_id -> annotator -> vote (last record wins)
  std::map<std::string, std::map<std::string, bool>> votes;
  for (const auto& l : labels) votes[l.review_id][l.annotator] = l.sarcastic;
  std::map<std::string, bool> resolved;
  for (const auto& [id, by_annotator] : votes) {
    std::size_t yes = 0;
    for (const auto& [_, v] : by_annotator) yes += v ? 1 : 0;
    resolved[id] = 2 * yes > by_annotator.size();
  }
  return resolved;
}

LabelJoin attach_labels(std::span<const Review> reviews,
                        std::span<const SarcasmLabel> labels) {
  auto resolved = resolve_labels(labels);
  LabelJoin join;
  std::unordered_set<std::string> known;
  for (const auto& r : reviews) {
    known.insert(r.review_id);
    auto it = resolved.find(r.review_id);
    if (it == resolved.end()) {
      ++join.unlabeled;
      continue;
    }
    join.labeled.push_back({r, it->second});
  }
  for (const auto& [id, _] : resolved)
    if (!known.contains(id)) join.unknown_ids.push_back(id);
  return join;
}

StarBuckets segregate_by_stars(std::span<const Review> reviews) {
  StarBuckets buckets;
  for (const auto& r : reviews) buckets.at(r.stars - 1).push_back(r);
  return buckets;
}

LabeledStarBuckets segregate_by_stars(std::span<const LabeledReview> reviews) {
  LabeledStarBuckets buckets;
  for (const auto& r : reviews) buckets.at(r.review.stars - 1).push_back(r);
  return buckets;
}

DatasetSplit make_split(std::span<const LabeledReview> pool, std::size_t train_n,
                        std::size_t test_n, std::uint64_t seed) {
  const std::size_t need = train_n + test_n;
  if (pool.size() < need)
    throw DataError("insufficient pool: need " + std::to_string(need) + ", have " +
                    std::to_string(pool.size()));
  check_single_star(pool);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(std::span(order), rng);

  DatasetSplit split;
  split.stars = pool.empty() ? 0 : pool.front().review.stars;
  split.seed = seed;
  split.train.reserve(train_n);
  split.test.reserve(test_n);
  for (std::size_t i = 0; i < train_n; ++i) split.train.push_back(pool[order[i]]);
  for (std::size_t i = train_n; i < need; ++i) split.test.push_back(pool[order[i]]);
  return split;
}

std::vector<LabeledReview> curriculum_subset(std::span<const LabeledReview> pool,
                                             bool want_sarcastic, std::size_t n,
                                             std::uint64_t seed) {
  std::vector<LabeledReview> matching;
  for (const auto& r : pool)
    if (r.sarcastic == want_sarcastic) matching.push_back(r);
  if (matching.size() < n)
    throw DataError("insufficient " +
                    std::string(want_sarcastic ? "sarcastic" : "non-sarcastic") +
                    " reviews: requested " + std::to_string(n) + ", available " +
                    std::to_string(matching.size()));
  Rng rng(seed);
  shuffle(std::span(matching), rng);
  matching.resize(n);
  return matching;
}

SplitManifest manifest_of(const DatasetSplit& split) {
  SplitManifest m{split.stars, split.seed, {}, {}};
  for (const auto& r : split.train) m.train_ids.push_back(r.review.review_id);
  for (const auto& r : split.test) m.test_ids.push_back(r.review.review_id);
  return m;
}

void write_manifest(const SplitManifest& m, const std::filesystem::path& path) {
  json j = {{"stars", m.stars},
            {"seed", m.seed},
            {"train_n", m.train_ids.size()},
            {"test_n", m.test_ids.size()},
            {"train", m.train_ids},
            {"test", m.test_ids}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

SplitManifest read_manifest(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed split manifest " + path.string());
  try {
    SplitManifest m;
    m.stars = j.at("stars").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train_ids = j.at("train").get<std::vector<std::string>>();
    m.test_ids = j.at("test").get<std::vector<std::string>>();
    if (j.at("train_n").get<std::size_t>() != m.train_ids.size() ||
        j.at("test_n").get<std::size_t>() != m.test_ids.size())
      throw DataError("split manifest sizes disagree with id lists");
    return m;
  } catch (const json::exception& e) {
    throw DataError("invalid split manifest " + path.string() + ": " + e.what());
  }
}

DatasetSplit split_from_manifest(const SplitManifest& m,
                                 std::span<const LabeledReview> corpus) {
  std::unordered_map<std::string, const LabeledReview*> by_id;
  for (const auto& r : corpus) by_id.emplace(r.review.review_id, &r);
  auto lookup = [&](const std::string& id) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw DataError("split manifest names unknown or unlabeled review " + id);
    return *it->second;
  };
  DatasetSplit split{m.stars, {}, {}, m.seed};
  for (const auto& id : m.train_ids) split.train.push_back(lookup(id));
  for (const auto& id : m.test_ids) split.test.push_back(lookup(id));
  return split;
}

}  // namespace sarcasm
