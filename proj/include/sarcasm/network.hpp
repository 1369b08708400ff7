#pragma once

// Feed-forward classifier: 15 inputs, one or two ReLU hidden layers with
// inverted dropout, 2-way softmax output, exact backprop and Adam.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sarcasm/features.hpp"
#include "sarcasm/rng.hpp"

namespace sarcasm {

inline constexpr std::size_t kInputDim = kNumFeatures;
inline constexpr std::size_t kOutputDim = 2;
inline constexpr std::size_t kMinHidden = 7;
inline constexpr std::size_t kMaxHidden = 15;

// Class 1 is sarcastic.
inline constexpr int kSarcastic = 1;
inline constexpr int kNotSarcastic = 0;

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const Matrix&) const = default;
};

struct Layer {
  Matrix weights;  // fan_out x fan_in
  std::vector<double> bias;
  bool operator==(const Layer&) const = default;
};

struct MlpConfig {
  std::size_t input_dim = kInputDim;
  std::vector<std::size_t> hidden{15, 15};
  std::size_t output_dim = kOutputDim;
  double keep_prob = 0.75;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the violated constraint.
  void validate() const;
  bool operator==(const MlpConfig&) const = default;
};

struct MlpModel {
  MlpConfig config;
  std::vector<Layer> layers;
  bool operator==(const MlpModel&) const = default;
};

// Same shapes as the model's layers.
struct Gradients {
  std::vector<Layer> layers;
};

// Zeroed parameter set shaped like the model.
std::vector<Layer> zeros_like(const MlpModel& model);

// Glorot-uniform weights from the config seed, zero biases.
MlpModel init_model(const MlpConfig& config);

enum class Mode { Train, Infer };

struct ForwardTrace {
  Mode mode = Mode::Infer;
  // activations[0] is the input; activations[l + 1] is the output of layer l
  // (after ReLU and dropout for hidden layers, softmax for the last).
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;  // one per layer
  // Per hidden layer, entries in {0, 1/keep_prob}. Empty when no dropout ran.
  std::vector<std::vector<double>> masks;
  std::array<double, kOutputDim> probs{};
};

// Stable softmax over two logits.
std::array<double, kOutputDim> softmax(std::span<const double, kOutputDim> logits);

// Train mode needs rng unless keep_prob is 1. Throws ConfigError on a
// dimension mismatch.
ForwardTrace forward(const MlpModel& model, std::span<const double> x, Mode mode,
                     Rng* rng = nullptr);

inline constexpr double kProbFloor = 1e-12;

// -ln(max(p[y], 1e-12))
double cross_entropy(std::span<const double, kOutputDim> p, int y);

Gradients backward(const MlpModel& model, const ForwardTrace& trace, int y);

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  std::vector<Layer> m;
  std::vector<Layer> v;
  std::uint64_t t = 0;

  static AdamState for_model(const MlpModel& model);
};

// One bias-corrected Adam update in place. Throws TrainingDiverged naming the
// first non-finite gradient entry; nothing is modified in that case.
void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, double lr);

struct Prediction {
  int label = kNotSarcastic;
  double confidence = 0.5;
};

// Infer-mode argmax; ties go to non-sarcastic.
Prediction predict(const MlpModel& model, std::span<const double> x);

struct Example {
  FeatureVector x;
  int label = kNotSarcastic;
};

struct BatchGradient {
  Gradients grads;  // mean over the batch
  double mean_loss = 0.0;
  std::size_t correct = 0;  // train-mode argmax hits
};

// Mean loss gradient over a minibatch. Example i's dropout stream is seeded
// with derive_seed(dropout_seed, i), so results do not depend on threading.
// OpenMP parallel over examples; sums are reduced in example order.
BatchGradient batch_gradient(const MlpModel& model, std::span<const Example> batch,
                             Mode mode, std::uint64_t dropout_seed);
// Single-threaded reference for batch_gradient.
BatchGradient batch_gradient_serial(const MlpModel& model,
                                    std::span<const Example> batch, Mode mode,
                                    std::uint64_t dropout_seed);

}  // namespace sarcasm
