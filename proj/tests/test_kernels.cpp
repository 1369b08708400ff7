// Parallel kernels must agree bit-for-bit with their serial references.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "sarcasm/training.hpp"
#include "test_support.hpp"

using namespace sarcasm;
using sarcasm::testing::bundled_lexicons;

namespace {

const FeaturePipeline& pipeline() {
  static const FeaturePipeline p(bundled_lexicons());
  return p;
}

const std::vector<std::string> kWords = {"Haha", "God", "so", "amazing", "awful", "!!", "??",
                                         "?!", "...", "WOW", "sooo", "you", "we", "food",
                                         "!", "fine", "really", "\xFF"};

std::vector<std::string> texts(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out(n);
  for (auto& t : out) {
    const auto len = uniform_below(rng, 25);
    for (std::uint64_t i = 0; i < len; ++i) t += kWords[uniform_below(rng, kWords.size())] + " ";
  }
  return out;
}

struct ThreadCount {
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("extract_all matches serial") {
  const auto owned = texts(2000, 1);
  std::vector<std::string_view> views(owned.begin(), owned.end());
  const auto ref = extract_all_serial(pipeline(), views);
  for (int threads : {1, 2, 4}) {
    ThreadCount tc(threads);
    const auto par = extract_all(pipeline(), views);
    REQUIRE(par.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      REQUIRE(par[i].counts.has_value() == ref[i].counts.has_value());
      if (ref[i].counts) {
        REQUIRE(par[i].counts->values == ref[i].counts->values);
        REQUIRE(par[i].counts->word_count == ref[i].counts->word_count);
      } else {
        REQUIRE(par[i].error == ref[i].error);
      }
    }
  }
}

TEST_CASE("batch_gradient matches serial") {
  MlpConfig cfg;
  cfg.seed = 5;
  const auto model = init_model(cfg);
  Rng rng(6);
  std::vector<Example> batch(100);
  for (auto& e : batch) {
    for (double& v : e.x.values) v = uniform01(rng);
    e.label = static_cast<int>(uniform_below(rng, 2));
  }
  for (auto mode : {Mode::Train, Mode::Infer}) {
    const auto ref = batch_gradient_serial(model, batch, mode, 77);
    for (int threads : {1, 2, 4}) {
      ThreadCount tc(threads);
      const auto par = batch_gradient(model, batch, mode, 77);
      REQUIRE(par.mean_loss == ref.mean_loss);
      REQUIRE(par.correct == ref.correct);
      REQUIRE(par.grads.layers == ref.grads.layers);
    }
  }
}

TEST_CASE("batch_gradient rejects bad labels") {
  const auto model = init_model(MlpConfig{});
  std::vector<Example> batch(3);
  batch[1].label = 2;
  CHECK_THROWS(batch_gradient(model, batch, Mode::Infer, 1));
  CHECK_THROWS(batch_gradient_serial(model, batch, Mode::Infer, 1));
}

TEST_CASE("evaluate matches serial") {
  MlpConfig cfg;
  cfg.seed = 8;
  const auto model = init_model(cfg);
  const auto owned = texts(500, 9);
  std::vector<LabeledReview> test;
  for (std::size_t i = 0; i < owned.size(); ++i)
    test.push_back({{"r" + std::to_string(i), 3, owned[i].empty() ? "x" : owned[i]}, i % 3 == 0});
  const auto ref = evaluate_serial(model, test, pipeline());
  for (int threads : {1, 2, 4}) {
    ThreadCount tc(threads);
    const auto par = evaluate(model, test, pipeline());
    REQUIRE(par.cm == ref.cm);
    REQUIRE(par.excluded == ref.excluded);
    REQUIRE(par.exclusion_reasons == ref.exclusion_reasons);
  }
}
