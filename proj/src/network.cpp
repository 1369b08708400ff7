#include "sarcasm/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sarcasm/errors.hpp"

namespace sarcasm {

void MlpConfig::validate() const {
  if (input_dim != kInputDim)
    throw ConfigError("input_dim must be " + std::to_string(kInputDim));
  if (output_dim != kOutputDim)
    throw ConfigError("output_dim must be " + std::to_string(kOutputDim));
  if (hidden.empty() || hidden.size() > 2)
    throw ConfigError("hidden must list 1 or 2 layer widths");
  for (std::size_t w : hidden)
    if (w < kMinHidden || w > kMaxHidden)
      throw ConfigError("hidden layer width " + std::to_string(w) +
                        " outside 7..=15");
  if (!(keep_prob > 0.0 && keep_prob <= 1.0))
    throw ConfigError("keep_prob must be in (0, 1]");
}

std::vector<Layer> zeros_like(const MlpModel& model) {
  std::vector<Layer> out;
  out.reserve(model.layers.size());
  for (const auto& l : model.layers)
    out.push_back({Matrix(l.weights.rows, l.weights.cols),
                   std::vector<double>(l.bias.size(), 0.0)});
  return out;
}

MlpModel init_model(const MlpConfig& config) {
  config.validate();
  MlpModel model{config, {}};
  Rng rng(config.seed);
  std::size_t fan_in = config.input_dim;
  std::vector<std::size_t> widths = config.hidden;
  widths.push_back(config.output_dim);
  for (std::size_t fan_out : widths) {
    Layer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0)};
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : layer.weights.data) w = (2.0 * uniform01(rng) - 1.0) * limit;
    model.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return model;
}

std::array<double, kOutputDim> softmax(std::span<const double, kOutputDim> logits) {
  const double top = std::max(logits[0], logits[1]);
  std::array<double, kOutputDim> p{std::exp(logits[0] - top), std::exp(logits[1] - top)};
  const double sum = p[0] + p[1];
  p[0] /= sum;
  p[1] /= sum;
  return p;
}

ForwardTrace forward(const MlpModel& model, std::span<const double> x, Mode mode,
                     Rng* rng) {
  if (model.layers.empty()) throw ConfigError("model has no layers");
  if (x.size() != model.layers.front().weights.cols)
    throw ConfigError("input has " + std::to_string(x.size()) + " components, model expects " +
                      std::to_string(model.layers.front().weights.cols));
  const double keep = model.config.keep_prob;
  const bool dropout = mode == Mode::Train && keep < 1.0;
  if (dropout && rng == nullptr) throw ConfigError("train-mode forward needs an rng");

  ForwardTrace tr;
  tr.mode = mode;
  tr.activations.emplace_back(x.begin(), x.end());
  const std::size_t last = model.layers.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const Layer& layer = model.layers[l];
    const auto& in = tr.activations.back();
    if (in.size() != layer.weights.cols) throw ConfigError("layer shapes do not chain");
    std::vector<double> z(layer.weights.rows);
    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      double acc = layer.bias[r];
      for (std::size_t c = 0; c < layer.weights.cols; ++c) acc += layer.weights(r, c) * in[c];
      z[r] = acc;
    }
    tr.pre_activations.push_back(z);

    if (l == last) {
      if (z.size() != kOutputDim) throw ConfigError("output layer must have 2 units");
      tr.probs = softmax(std::span<const double, kOutputDim>(z.data(), kOutputDim));
      tr.activations.emplace_back(tr.probs.begin(), tr.probs.end());
      break;
    }

    std::vector<double> a(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) a[r] = z[r] > 0.0 ? z[r] : 0.0;
    if (dropout) {
      std::vector<double> mask(a.size());
      const double scale = 1.0 / keep;
      for (std::size_t r = 0; r < a.size(); ++r) {
        mask[r] = uniform01(*rng) < keep ? scale : 0.0;
        a[r] *= mask[r];
      }
      tr.masks.push_back(std::move(mask));
    }
    tr.activations.push_back(std::move(a));
  }
  return tr;
}

double cross_entropy(std::span<const double, kOutputDim> p, int y) {
  return -std::log(std::max(p[static_cast<std::size_t>(y)], kProbFloor));
}

Gradients backward(const MlpModel& model, const ForwardTrace& trace, int y) {
  const std::size_t n = model.layers.size();
  if (trace.pre_activations.size() != n || trace.activations.size() != n + 1)
    throw ConfigError("trace does not match model depth");
  if (!trace.masks.empty() && trace.masks.size() != n - 1)
    throw ConfigError("trace dropout masks do not match hidden layers");
  if (y != kSarcastic && y != kNotSarcastic) throw ConfigError("label must be 0 or 1");

  Gradients g{zeros_like(model)};
  std::vector<double> delta{trace.probs[0], trace.probs[1]};
  delta[static_cast<std::size_t>(y)] -= 1.0;

  for (std::size_t l = n; l-- > 0;) {
    const Layer& layer = model.layers[l];
    const auto& in = trace.activations[l];
    if (delta.size() != layer.weights.rows || in.size() != layer.weights.cols)
      throw ConfigError("trace shapes do not match model");
    Layer& gl = g.layers[l];
    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      gl.bias[r] = delta[r];
      for (std::size_t c = 0; c < layer.weights.cols; ++c) gl.weights(r, c) = delta[r] * in[c];
    }
    if (l == 0) break;

    // Propagate into hidden layer l-1: W^T delta, gated by ReLU and dropout.
    const auto& z_prev = trace.pre_activations[l - 1];
    std::vector<double> prev(layer.weights.cols, 0.0);
    for (std::size_t c = 0; c < layer.weights.cols; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < layer.weights.rows; ++r) acc += layer.weights(r, c) * delta[r];
      acc = z_prev[c] > 0.0 ? acc : 0.0;
      if (!trace.masks.empty()) acc *= trace.masks[l - 1][c];
      prev[c] = acc;
    }
    delta = std::move(prev);
  }
  return g;
}

AdamState AdamState::for_model(const MlpModel& model) {
  return {zeros_like(model), zeros_like(model), 0};
}

namespace {

void check_finite(const Gradients& grads) {
  for (std::size_t l = 0; l < grads.layers.size(); ++l) {
    const auto& gl = grads.layers[l];
    for (std::size_t r = 0; r < gl.weights.rows; ++r)
      for (std::size_t c = 0; c < gl.weights.cols; ++c)
        if (!std::isfinite(gl.weights(r, c)))
          throw TrainingDiverged("non-finite gradient at layer " + std::to_string(l + 1) +
                                 " weights[" + std::to_string(r) + "," +
                                 std::to_string(c) + "]");
    for (std::size_t r = 0; r < gl.bias.size(); ++r)
      if (!std::isfinite(gl.bias[r]))
        throw TrainingDiverged("non-finite gradient at layer " + std::to_string(l + 1) +
                               " bias[" + std::to_string(r) + "]");
  }
}

void adam_update(std::span<double> param, std::span<const double> grad,
                 std::span<double> m, std::span<double> v, double lr, double c1,
                 double c2) {
  using S = AdamState;
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = S::kBeta1 * m[i] + (1.0 - S::kBeta1) * g;
    v[i] = S::kBeta2 * v[i] + (1.0 - S::kBeta2) * g * g;
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    param[i] -= lr * m_hat / (std::sqrt(v_hat) + S::kEpsilon);
  }
}

}  // namespace

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, double lr) {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (grads.layers.size() != model.layers.size() || state.m.size() != model.layers.size() ||
      state.v.size() != model.layers.size())
    throw ConfigError("gradient/optimizer shapes do not match model");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& p = model.layers[l];
    const std::array<const Layer*, 3> others{&grads.layers[l], &state.m[l], &state.v[l]};
    for (const Layer* o : others)
      if (o->weights.rows != p.weights.rows || o->weights.cols != p.weights.cols ||
          o->bias.size() != p.bias.size())
        throw ConfigError("gradient/optimizer shapes do not match model");
  }
  check_finite(grads);

  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(AdamState::kBeta1, t);
  const double c2 = 1.0 - std::pow(AdamState::kBeta2, t);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    adam_update(model.layers[l].weights.data, grads.layers[l].weights.data,
                state.m[l].weights.data, state.v[l].weights.data, lr, c1, c2);
    adam_update(model.layers[l].bias, grads.layers[l].bias, state.m[l].bias,
                state.v[l].bias, lr, c1, c2);
  }
}

Prediction predict(const MlpModel& model, std::span<const double> x) {
  const auto tr = forward(model, x, Mode::Infer);
  if (tr.probs[1] > tr.probs[0]) return {kSarcastic, tr.probs[1]};
  return {kNotSarcastic, tr.probs[0]};
}

namespace {

struct ExampleResult {
  Gradients grads;
  double loss = 0.0;
  bool correct = false;
};

ExampleResult example_gradient(const MlpModel& model, const Example& ex, Mode mode,
                               std::uint64_t seed) {
  Rng rng(seed);
  const auto tr = forward(model, ex.x.span(), mode, &rng);
  const int guess = tr.probs[1] > tr.probs[0] ? kSarcastic : kNotSarcastic;
  return {backward(model, tr, ex.label), cross_entropy(tr.probs, ex.label),
          guess == ex.label};
}

// Sums per-example results in example order and scales by 1/n. Parallel over
// parameters only, so the summation order never changes.
BatchGradient reduce(const MlpModel& model, const std::vector<ExampleResult>& parts,
                     bool parallel) {
  BatchGradient out{{zeros_like(model)}, 0.0, 0};
  if (parts.empty()) return out;
  const double inv = 1.0 / static_cast<double>(parts.size());
  for (std::size_t l = 0; l < out.grads.layers.size(); ++l) {
    auto& w = out.grads.layers[l].weights.data;
    auto& b = out.grads.layers[l].bias;
    const auto nw = static_cast<std::ptrdiff_t>(w.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < nw; ++i) {
      double acc = 0.0;
      for (const auto& p : parts) acc += p.grads.layers[l].weights.data[i];
      w[i] = acc * inv;
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      double acc = 0.0;
      for (const auto& p : parts) acc += p.grads.layers[l].bias[i];
      b[i] = acc * inv;
    }
  }
  double loss = 0.0;
  for (const auto& p : parts) {
    loss += p.loss;
    out.correct += p.correct ? 1 : 0;
  }
  out.mean_loss = loss * inv;
  return out;
}

}  // namespace

BatchGradient batch_gradient(const MlpModel& model, std::span<const Example> batch,
                             Mode mode, std::uint64_t dropout_seed) {
  std::vector<ExampleResult> parts(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  // forward/backward only throw on shape errors; validate once up front so
  // nothing escapes the parallel region.
  if (n > 0) (void)forward(model, batch[0].x.span(), Mode::Infer);
  for (const auto& ex : batch)
    if (ex.label != kSarcastic && ex.label != kNotSarcastic)
      throw ConfigError("label must be 0 or 1");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    parts[i] = example_gradient(model, batch[i], mode,
                                derive_seed(dropout_seed, static_cast<std::uint64_t>(i)));
  return reduce(model, parts, true);
}

BatchGradient batch_gradient_serial(const MlpModel& model,
                                    std::span<const Example> batch, Mode mode,
                                    std::uint64_t dropout_seed) {
  std::vector<ExampleResult> parts;
  parts.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    parts.push_back(example_gradient(model, batch[i], mode, derive_seed(dropout_seed, i)));
  return reduce(model, parts, false);
}

}  // namespace sarcasm
