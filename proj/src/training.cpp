#include "sarcasm/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "sarcasm/errors.hpp"
#include "sarcasm/rng.hpp"

namespace sarcasm {

namespace {

constexpr std::uint64_t kStageStream = 0x53746167;   // "Stag"
constexpr std::uint64_t kSubsetStream = 0x53756273;  // "Subs"

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_count(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s.front() == '-')
    throw ConfigError("invalid " + std::string(what) + " '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view to_string(Stage::Kind kind) {
  switch (kind) {
    case Stage::Kind::SarcasticOnly: return "sarcastic";
    case Stage::Kind::NonSarcasticDominated: return "nonsarcastic";
    case Stage::Kind::Main: return "main";
  }
  return "?";
}

std::vector<Stage> parse_stages(std::string_view spec) {
  std::vector<Stage> stages;
  for (const auto& item : split_on(spec, ',')) {
    const auto f = split_on(item, ':');
    if (f[0] == "main" && f.size() == 1) {
      stages.push_back(Stage::main());
    } else if (f[0] == "sarcastic" && f.size() == 2) {
      stages.push_back(Stage::sarcastic_only(parse_count(f[1], "stage size")));
    } else if (f[0] == "nonsarcastic" && (f.size() == 2 || f.size() == 3)) {
      double ratio = 3.0;
      if (f.size() == 3) {
        try {
          std::size_t used = 0;
          ratio = std::stod(f[2], &used);
          if (used != f[2].size()) throw ConfigError("");
        } catch (const std::exception&) {
          throw ConfigError("invalid stage ratio '" + f[2] + "'");
        }
        if (!(ratio > 0.0) || !std::isfinite(ratio))
          throw ConfigError("stage ratio must be positive");
      }
      stages.push_back(Stage::non_sarcastic_dominated(parse_count(f[1], "stage size"), ratio));
    } else {
      throw ConfigError("invalid stage '" + item +
                        "' (expected sarcastic:N, nonsarcastic:N[:RATIO] or main)");
    }
  }
  return stages;
}

std::string format_stages(std::span<const Stage> stages) {
  std::string out;
  for (const auto& s : stages) {
    if (!out.empty()) out += ',';
    out += to_string(s.kind);
    if (s.kind == Stage::Kind::SarcasticOnly) {
      out += ':' + std::to_string(s.n);
    } else if (s.kind == Stage::Kind::NonSarcasticDominated) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", s.ratio);
      out += ':' + std::to_string(s.n) + ':' + buf;
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be positive");
  if (epochs == 0) throw ConfigError("epochs must be at least 1");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (stages.empty()) throw ConfigError("at least one training stage is required");
  if (lr_grid.empty()) throw ConfigError("lr_grid must not be empty");
  for (double v : lr_grid)
    if (!(v > 0.0)) throw ConfigError("lr_grid entries must be positive");
  if (!std::is_sorted(lr_grid.begin(), lr_grid.end()) ||
      std::adjacent_find(lr_grid.begin(), lr_grid.end()) != lr_grid.end())
    throw ConfigError("lr_grid must be strictly ascending");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay must be in (0, 1]");
  model.validate();
}

ConfusionMatrix evaluate_examples(const MlpModel& model, std::span<const Example> examples) {
  std::vector<int> guesses(examples.size());
  const auto n = static_cast<std::ptrdiff_t>(examples.size());
  if (n > 0) (void)predict(model, examples[0].x.span());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) guesses[i] = predict(model, examples[i].x.span()).label;
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < examples.size(); ++i) cm.add(guesses[i], examples[i].label);
  return cm;
}

TrainResult train_staged(std::span<const StageData> stages, const TrainConfig& config) {
  config.validate();
  TrainResult result{init_model(config.model), {}};
  MlpModel& model = result.model;
  AdamState adam = AdamState::for_model(model);
  double lr = config.lr;

  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& data = stages[s];
    const std::size_t count = data.examples.size();
    if (count < config.batch_size)
      throw ConfigError("stage " + std::to_string(s + 1) + " (" +
                        std::string(to_string(data.stage.kind)) + ") has " +
                        std::to_string(count) + " examples, fewer than batch size " +
                        std::to_string(config.batch_size));
    if (config.reset_adam_per_stage) adam = AdamState::for_model(model);

    const std::uint64_t stage_seed = derive_seed(config.seed, kStageStream, s);
    Rng order_rng(stage_seed);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span(order), order_rng);

    std::vector<Example> batch;
    batch.reserve(config.batch_size);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
      if (config.reshuffle_each_epoch && epoch > 1) shuffle(std::span(order), order_rng);
      double loss_sum = 0.0;
      std::size_t batches = 0;
      for (std::size_t start = 0; start < count; start += config.batch_size) {
        const std::size_t end = std::min(count, start + config.batch_size);
        batch.clear();
        for (std::size_t i = start; i < end; ++i) batch.push_back(data.examples[order[i]]);
        const auto where = "stage " + std::to_string(s + 1) + ", epoch " +
                           std::to_string(epoch) + ", batch " + std::to_string(batches + 1);
        const auto bg = batch_gradient(model, batch, Mode::Train,
                                       derive_seed(stage_seed, epoch, batches));
        if (!std::isfinite(bg.mean_loss))
          throw TrainingDiverged("non-finite loss at " + where);
        try {
          adam_step(model, bg.grads, adam, lr);
        } catch (const TrainingDiverged& e) {
          throw TrainingDiverged(std::string(e.what()) + " at " + where);
        }
        loss_sum += bg.mean_loss;
        ++batches;
        ++result.steps;
      }
      const auto cm = evaluate_examples(model, data.examples);
      result.history.push_back({s, data.stage.kind, epoch, lr,
                                loss_sum / static_cast<double>(batches), prf1(cm).accuracy});
      lr *= config.lr_decay;
    }
  }
  return result;
}

ExampleSet to_examples(const FeaturePipeline& pipeline, std::span<const LabeledReview> reviews) {
  std::vector<std::string_view> texts;
  texts.reserve(reviews.size());
  for (const auto& r : reviews) texts.push_back(r.review.text);
  const auto outcomes = extract_all(pipeline, texts);
  ExampleSet set;
  set.examples.reserve(reviews.size());
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (!outcomes[i].counts) {
      ++set.excluded;
      continue;
    }
    set.examples.push_back({normalize(*outcomes[i].counts),
                            reviews[i].sarcastic ? kSarcastic : kNotSarcastic});
  }
  return set;
}

std::vector<LabeledReview> stage_reviews(const Stage& stage, std::size_t stage_index,
                                         const DatasetSplit& split,
                                         std::span<const LabeledReview> curriculum_pool,
                                         std::uint64_t seed) {
  const auto sub_seed = [&](std::uint64_t k) {
    return derive_seed(seed, kSubsetStream, stage_index, k);
  };
  switch (stage.kind) {
    case Stage::Kind::Main:
      return split.train;
    case Stage::Kind::SarcasticOnly:
      return curriculum_subset(curriculum_pool, true, stage.n, sub_seed(1));
    case Stage::Kind::NonSarcasticDominated: {
      const auto non = static_cast<std::size_t>(
          std::llround(static_cast<double>(stage.n) * stage.ratio / (stage.ratio + 1.0)));
      auto out = curriculum_subset(curriculum_pool, false, non, sub_seed(2));
      auto sarcastic = curriculum_subset(curriculum_pool, true, stage.n - non, sub_seed(1));
      out.insert(out.end(), sarcastic.begin(), sarcastic.end());
      return out;
    }
  }
  return {};
}

TrainResult train(const DatasetSplit& split, std::span<const LabeledReview> curriculum_pool,
                  const FeaturePipeline& pipeline, const TrainConfig& config) {
  config.validate();
  // Curriculum draws never see the held-out test reviews.
  std::unordered_set<std::string> held_out;
  for (const auto& r : split.test) held_out.insert(r.review.review_id);
  std::vector<LabeledReview> pool;
  pool.reserve(curriculum_pool.size());
  for (const auto& r : curriculum_pool)
    if (!held_out.contains(r.review.review_id)) pool.push_back(r);

  std::vector<StageData> stages;
  for (std::size_t s = 0; s < config.stages.size(); ++s) {
    const auto reviews = stage_reviews(config.stages[s], s, split, pool, config.seed);
    stages.push_back({config.stages[s], to_examples(pipeline, reviews).examples});
  }
  return train_staged(stages, config);
}

namespace {

template <bool Parallel>
EvalOutcome evaluate_impl(const MlpModel& model, std::span<const LabeledReview> test,
                          const FeaturePipeline& pipeline) {
  if (test.empty()) throw DataError("evaluation set is empty");
  std::vector<std::string_view> texts;
  texts.reserve(test.size());
  for (const auto& r : test) texts.push_back(r.review.text);
  const auto outcomes =
      Parallel ? extract_all(pipeline, texts) : extract_all_serial(pipeline, texts);

  (void)predict(model, FeatureVector{}.span());  // shape check outside the loop
  std::vector<int> guesses(test.size(), -1);
  const auto n = static_cast<std::ptrdiff_t>(test.size());
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (outcomes[i].counts)
      guesses[i] = predict(model, normalize(*outcomes[i].counts).span()).label;

  EvalOutcome out;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!outcomes[i].counts) {
      ++out.excluded;
      out.exclusion_reasons.push_back(test[i].review.review_id + ": " + outcomes[i].error);
      continue;
    }
    out.cm.add(guesses[i], test[i].sarcastic ? kSarcastic : kNotSarcastic);
  }
  return out;
}

}  // namespace

EvalOutcome evaluate(const MlpModel& model, std::span<const LabeledReview> test,
                     const FeaturePipeline& pipeline) {
  return evaluate_impl<true>(model, test, pipeline);
}

EvalOutcome evaluate_serial(const MlpModel& model, std::span<const LabeledReview> test,
                            const FeaturePipeline& pipeline) {
  return evaluate_impl<false>(model, test, pipeline);
}

std::vector<SweepRow> lr_sweep(const DatasetSplit& split,
                               std::span<const LabeledReview> curriculum_pool,
                               const FeaturePipeline& pipeline, const TrainConfig& config) {
  config.validate();
  std::vector<SweepRow> rows;
  for (double lr : config.lr_grid) {
    TrainConfig c = config;
    c.lr = lr;
    const auto trained = train(split, curriculum_pool, pipeline, c);
    const auto outcome = evaluate(trained.model, split.test, pipeline);
    rows.push_back({lr, prf1(outcome.cm), outcome.excluded});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.metrics.accuracy != b.metrics.accuracy) return a.metrics.accuracy > b.metrics.accuracy;
    return a.lr < b.lr;
  });
  return rows;
}

}  // namespace sarcasm
