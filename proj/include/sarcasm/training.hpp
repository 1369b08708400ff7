#pragma once

// Curriculum-staged minibatch training, evaluation, and learning-rate sweeps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sarcasm/corpus.hpp"
#include "sarcasm/features.hpp"
#include "sarcasm/metrics.hpp"
#include "sarcasm/network.hpp"

namespace sarcasm {

struct Stage {
  enum class Kind { SarcasticOnly, NonSarcasticDominated, Main };
  Kind kind = Kind::Main;
  std::size_t n = 0;     // curriculum stages only
  double ratio = 3.0;    // non-sarcastic : sarcastic, NonSarcasticDominated only

  static Stage sarcastic_only(std::size_t n) { return {Kind::SarcasticOnly, n, 0.0}; }
  static Stage non_sarcastic_dominated(std::size_t n, double ratio = 3.0) {
    return {Kind::NonSarcasticDominated, n, ratio};
  }
  static Stage main() { return {Kind::Main, 0, 0.0}; }
  bool operator==(const Stage&) const = default;
};

std::string_view to_string(Stage::Kind kind);

// "sarcastic:500,nonsarcastic:500:3,main" <-> stage list. Throws ConfigError.
std::vector<Stage> parse_stages(std::string_view spec);
std::string format_stages(std::span<const Stage> stages);

struct TrainConfig {
  double lr = 0.01;
  std::size_t epochs = 10;
  std::size_t batch_size = 100;
  std::vector<Stage> stages{Stage::sarcastic_only(500),
                            Stage::non_sarcastic_dominated(500, 3.0), Stage::main()};
  std::vector<double> lr_grid{1e-4, 1e-3, 1e-2};
  std::uint64_t seed = 42;
  // Multiplied into the learning rate after every epoch; 1 disables decay.
  double lr_decay = 1.0;
  bool reset_adam_per_stage = true;
  bool reshuffle_each_epoch = false;
  MlpConfig model;

  void validate() const;
};

struct HistoryRecord {
  std::size_t stage_index = 0;
  Stage::Kind stage = Stage::Kind::Main;
  std::size_t epoch = 0;  // 1-based within the stage
  double lr = 0.0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;  // infer mode, after the epoch
};

struct TrainResult {
  MlpModel model;
  std::vector<HistoryRecord> history;
  std::size_t steps = 0;  // optimizer updates across all stages
};

struct StageData {
  Stage stage;
  std::vector<Example> examples;
};

// Runs the stages in order on precomputed examples. Each stage is shuffled
// once with its own derived seed and cut into fixed batches of batch_size
// (a trailing short batch is kept). Throws ConfigError if a stage holds fewer
// examples than batch_size, TrainingDiverged on non-finite loss or gradient.
TrainResult train_staged(std::span<const StageData> stages, const TrainConfig& config);

struct ExampleSet {
  std::vector<Example> examples;
  std::size_t excluded = 0;
};

ExampleSet to_examples(const FeaturePipeline& pipeline,
                       std::span<const LabeledReview> reviews);

// Builds every configured stage from the split and the curriculum pool, then
// trains. Curriculum subsets are drawn with seeds derived from config.seed.
TrainResult train(const DatasetSplit& split, std::span<const LabeledReview> curriculum_pool,
                  const FeaturePipeline& pipeline, const TrainConfig& config);

// Examples for one stage; exposed so callers can inspect curriculum draws.
std::vector<LabeledReview> stage_reviews(const Stage& stage, std::size_t stage_index,
                                         const DatasetSplit& split,
                                         std::span<const LabeledReview> curriculum_pool,
                                         std::uint64_t seed);

struct EvalOutcome {
  ConfusionMatrix cm;
  std::size_t excluded = 0;
  std::vector<std::string> exclusion_reasons;
};

// Features -> predict -> tally. OpenMP parallel over reviews.
EvalOutcome evaluate(const MlpModel& model, std::span<const LabeledReview> test,
                     const FeaturePipeline& pipeline);
// Single-threaded reference for evaluate.
EvalOutcome evaluate_serial(const MlpModel& model, std::span<const LabeledReview> test,
                            const FeaturePipeline& pipeline);

ConfusionMatrix evaluate_examples(const MlpModel& model, std::span<const Example> examples);

struct SweepRow {
  double lr = 0.0;
  ClassMetrics metrics;
  std::size_t excluded = 0;
};

// Trains and evaluates once per grid point with identical seeds; rows come
// back ranked by test accuracy, ties broken by the lower learning rate.
std::vector<SweepRow> lr_sweep(const DatasetSplit& split,
                               std::span<const LabeledReview> curriculum_pool,
                               const FeaturePipeline& pipeline, const TrainConfig& config);

}  // namespace sarcasm
