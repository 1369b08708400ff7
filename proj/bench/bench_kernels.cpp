// Serial reference vs OpenMP kernel for each parallel hot path.
#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>
#include <vector>

#include "sarcasm/training.hpp"

using namespace sarcasm;

namespace {

const FeaturePipeline& pipeline() {
  static const FeaturePipeline p(
      Lexicons::load(std::filesystem::path(SARCASM_DEFAULT_DATA_DIR) / "lexicons"));
  return p;
}

std::vector<std::string> corpus(std::size_t n) {
  static const char* kWords[] = {"Haha", "God", "so", "amazing", "awful", "!!", "??", "?!",
                                 "...", "WOW", "sooo", "you", "we", "the", "food", "was",
                                 "!", "fine", "really", "service", "waited", "hour"};
  Rng rng(1);
  std::vector<std::string> out(n);
  for (auto& t : out) {
    const auto len = 20 + uniform_below(rng, 80);
    for (std::uint64_t i = 0; i < len; ++i) {
      t += kWords[uniform_below(rng, std::size(kWords))];
      t += ' ';
    }
  }
  return out;
}

template <bool Parallel>
void BM_extract(benchmark::State& state) {
  const auto owned = corpus(static_cast<std::size_t>(state.range(0)));
  const std::vector<std::string_view> views(owned.begin(), owned.end());
  for (auto _ : state) {
    auto out = Parallel ? extract_all(pipeline(), views) : extract_all_serial(pipeline(), views);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_batch_gradient(benchmark::State& state) {
  MlpConfig cfg;
  cfg.seed = 3;
  const auto model = init_model(cfg);
  Rng rng(4);
  std::vector<Example> batch(static_cast<std::size_t>(state.range(0)));
  for (auto& e : batch) {
    for (double& v : e.x.values) v = uniform01(rng);
    e.label = static_cast<int>(uniform_below(rng, 2));
  }
  for (auto _ : state) {
    auto g = Parallel ? batch_gradient(model, batch, Mode::Train, 5)
                      : batch_gradient_serial(model, batch, Mode::Train, 5);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_evaluate(benchmark::State& state) {
  MlpConfig cfg;
  cfg.seed = 6;
  const auto model = init_model(cfg);
  const auto texts = corpus(static_cast<std::size_t>(state.range(0)));
  std::vector<LabeledReview> test;
  for (std::size_t i = 0; i < texts.size(); ++i)
    test.push_back({{"r" + std::to_string(i), 3, texts[i]}, i % 2 == 0});
  for (auto _ : state) {
    auto out = Parallel ? evaluate(model, test, pipeline())
                        : evaluate_serial(model, test, pipeline());
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_extract<false>)->Name("extract_all/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_extract<true>)->Name("extract_all/omp")->Arg(1000)->Arg(10000);
BENCHMARK(BM_batch_gradient<false>)->Name("batch_gradient/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_batch_gradient<true>)->Name("batch_gradient/omp")->Arg(100)->Arg(1000);
BENCHMARK(BM_evaluate<false>)->Name("evaluate/serial")->Arg(300)->Arg(3000);
BENCHMARK(BM_evaluate<true>)->Name("evaluate/omp")->Arg(300)->Arg(3000);

BENCHMARK_MAIN();
