#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sarcasm/errors.hpp"
#include "sarcasm/model_io.hpp"
#include "sarcasm/network.hpp"
#include "test_support.hpp"

using namespace sarcasm;

namespace {

MlpModel zero_model(std::vector<std::size_t> hidden = {15, 15}, double keep = 0.75) {
  MlpConfig cfg;
  cfg.hidden = std::move(hidden);
  cfg.keep_prob = keep;
  MlpModel m = init_model(cfg);
  for (auto& l : m.layers) {
    std::fill(l.weights.data.begin(), l.weights.data.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  return m;
}

std::vector<double> random_input(Rng& rng) {
  std::vector<double> x(kInputDim);
  for (double& v : x) v = uniform01(rng);
  return x;
}

// Random model with biases pulled away from zero so ReLU kinks are unlikely.
MlpModel random_model(Rng& rng, std::vector<std::size_t> hidden) {
  MlpConfig cfg;
  cfg.hidden = std::move(hidden);
  cfg.seed = rng();
  MlpModel m = init_model(cfg);
  for (auto& l : m.layers)
    for (double& b : l.bias) b = 0.4 * (uniform01(rng) - 0.5);
  return m;
}

}  // namespace

TEST_SUITE("init_model") {
  TEST_CASE("deterministic per seed") {
    MlpConfig cfg;
    cfg.hidden = {15, 15};
    cfg.seed = 7;
    CHECK(init_model(cfg) == init_model(cfg));
    MlpConfig other = cfg;
    other.seed = 8;
    CHECK_FALSE(init_model(cfg) == init_model(other));
  }

  TEST_CASE("shapes for two hidden layers of 15") {
    MlpConfig cfg;
    cfg.hidden = {15, 15};
    auto m = init_model(cfg);
    REQUIRE(m.layers.size() == 3);
    CHECK(m.layers[0].weights.rows == 15);
    CHECK(m.layers[0].weights.cols == 15);
    CHECK(m.layers[1].weights.rows == 15);
    CHECK(m.layers[1].weights.cols == 15);
    CHECK(m.layers[2].weights.rows == 2);
    CHECK(m.layers[2].weights.cols == 15);
    for (const auto& l : m.layers)
      for (double b : l.bias) CHECK(b == 0.0);
  }

  TEST_CASE("glorot bound") {
    MlpConfig cfg;
    cfg.hidden = {7};
    auto m = init_model(cfg);
    const double lim0 = std::sqrt(6.0 / (15 + 7)), lim1 = std::sqrt(6.0 / (7 + 2));
    for (double w : m.layers[0].weights.data) CHECK(std::abs(w) <= lim0);
    for (double w : m.layers[1].weights.data) CHECK(std::abs(w) <= lim1);
  }

  TEST_CASE("invalid configs") {
    MlpConfig cfg;
    cfg.hidden = {20};
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
    cfg.hidden = {6};
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
    cfg.hidden = {};
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
    cfg.hidden = {8, 8, 8};
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
    cfg.hidden = {8};
    cfg.keep_prob = 0.0;
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
    cfg.keep_prob = 0.5;
    cfg.input_dim = 14;
    CHECK_THROWS_AS(init_model(cfg), ConfigError);
  }
}

TEST_SUITE("forward") {
  TEST_CASE("zero model gives uniform probabilities") {
    auto m = zero_model();
    Rng rng(1);
    auto tr = forward(m, random_input(rng), Mode::Infer);
    CHECK(tr.probs[0] == 0.5);
    CHECK(tr.probs[1] == 0.5);
  }

  TEST_CASE("huge logits do not overflow") {
    auto m = zero_model();
    m.layers.back().bias = {1000.0, 0.0};
    auto tr = forward(m, std::vector<double>(15, 0.0), Mode::Infer);
    CHECK(std::isfinite(tr.probs[0]));
    CHECK(tr.probs[0] == doctest::Approx(1.0));
    CHECK(tr.probs[1] == doctest::Approx(0.0));
  }

  TEST_CASE("keep_prob 1 makes train and infer identical") {
    Rng rng(3);
    auto m = random_model(rng, {15, 15});
    m.config.keep_prob = 1.0;
    const auto x = random_input(rng);
    Rng drop(9);
    auto a = forward(m, x, Mode::Train, &drop);
    auto b = forward(m, x, Mode::Infer);
    CHECK(a.activations == b.activations);
    CHECK(a.pre_activations == b.pre_activations);
    CHECK(a.probs == b.probs);
    CHECK(a.masks.empty());
  }

  TEST_CASE("train mode requires an rng when dropping") {
    auto m = zero_model();
    CHECK_THROWS_AS(forward(m, std::vector<double>(15, 0.0), Mode::Train), ConfigError);
  }

  TEST_CASE("dimension mismatch") {
    auto m = zero_model();
    CHECK_THROWS_AS(forward(m, std::vector<double>(14, 0.0), Mode::Infer), ConfigError);
    CHECK_THROWS_AS(predict(m, std::vector<double>(16, 0.0)), ConfigError);
  }

  TEST_CASE("dropout mask structure and keep rate") {
    Rng rng(11);
    auto m = random_model(rng, {15, 15});
    m.config.keep_prob = 0.75;
    std::size_t kept = 0, total = 0;
    Rng drop(12);
    const auto x = random_input(rng);
    while (total < 100000) {
      auto tr = forward(m, x, Mode::Train, &drop);
      REQUIRE(tr.masks.size() == 2);
      for (const auto& mask : tr.masks)
        for (double v : mask) {
          REQUIRE((v == 0.0 || v == 1.0 / 0.75));
          kept += v != 0.0;
          ++total;
        }
    }
    const double rate = static_cast<double>(kept) / static_cast<double>(total);
    CHECK(std::abs(rate - 0.75) <= 0.01);
  }
}

TEST_SUITE("softmax and loss") {
  TEST_CASE("softmax sums to one for large magnitudes") {
    Rng rng(4);
    for (int i = 0; i < 10000; ++i) {
      const double scale = std::pow(10.0, 6.0 * uniform01(rng));
      const std::array<double, 2> z{scale * (2 * uniform01(rng) - 1),
                                    scale * (2 * uniform01(rng) - 1)};
      auto p = softmax(z);
      REQUIRE(p[0] >= 0.0);
      REQUIRE(p[1] >= 0.0);
      REQUIRE(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
    }
    auto p = softmax(std::array<double, 2>{1e6, -1e6});
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
  }

  TEST_CASE("cross entropy examples") {
    CHECK(cross_entropy(std::array<double, 2>{0.5, 0.5}, 1) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(cross_entropy(std::array<double, 2>{0.0, 1.0}, 1) == 0.0);
    const double clamped = cross_entropy(std::array<double, 2>{1.0, 0.0}, 1);
    CHECK(clamped == doctest::Approx(27.631021115928547).epsilon(1e-12));
    CHECK(std::isfinite(clamped));
  }
}

TEST_SUITE("backward") {
  TEST_CASE("zero model output delta") {
    auto m = zero_model();
    Rng rng(5);
    auto tr = forward(m, random_input(rng), Mode::Infer);
    auto g = backward(m, tr, 1);
    CHECK(g.layers.back().bias[0] == 0.5);
    CHECK(g.layers.back().bias[1] == -0.5);
  }

  TEST_CASE("zero input gives zero first-layer weight gradients") {
    Rng rng(6);
    auto m = random_model(rng, {15, 15});
    for (auto& l : m.layers) std::fill(l.bias.begin(), l.bias.end(), 0.0);
    auto tr = forward(m, std::vector<double>(15, 0.0), Mode::Infer);
    auto g = backward(m, tr, 0);
    for (double v : g.layers[0].weights.data) CHECK(v == 0.0);
  }

  TEST_CASE("matches central finite differences") {
    Rng rng(2718);
    for (int inst = 0; inst < 40; ++inst) {
      const std::vector<std::size_t> hidden =
          inst % 2 ? std::vector<std::size_t>{15, 15}
                   : std::vector<std::size_t>{7 + uniform_below(rng, 9)};
      auto m = random_model(rng, hidden);
      const auto x = random_input(rng);
      const int y = static_cast<int>(uniform_below(rng, 2));
      const auto analytic = oracle::flatten(backward(m, forward(m, x, Mode::Infer), y).layers);
      const auto numeric = oracle::numeric_gradient(m, x, y);
      REQUIRE(analytic.size() == numeric.size());
      for (std::size_t i = 0; i < analytic.size(); ++i)
        REQUIRE(oracle::relative_error(analytic[i], numeric[i]) < 1e-4);
    }
  }

  TEST_CASE("dropout masks gate the hidden deltas") {
    Rng rng(8);
    auto m = random_model(rng, {12});
    Rng drop(1);
    auto tr = forward(m, random_input(rng), Mode::Train, &drop);
    auto g = backward(m, tr, 1);
    for (std::size_t r = 0; r < 12; ++r)
      if (tr.masks[0][r] == 0.0) {
        CHECK(g.layers[0].bias[r] == 0.0);
        CHECK(g.layers[1].weights(0, r) == 0.0);
      }
  }

  TEST_CASE("shape mismatch") {
    auto a = zero_model({15, 15});
    auto b = zero_model({9});
    auto tr = forward(b, std::vector<double>(15, 0.0), Mode::Infer);
    CHECK_THROWS_AS(backward(a, tr, 0), ConfigError);
  }
}

TEST_SUITE("adam_step") {
  MlpModel single() {
    auto m = zero_model({7});
    return m;
  }

  TEST_CASE("closed-form first step") {
    auto m = single();
    auto state = AdamState::for_model(m);
    Gradients g{zeros_like(m)};
    g.layers[0].weights(0, 0) = 1.0;
    adam_step(m, g, state, 0.01);
    CHECK(state.t == 1);
    const double w = m.layers[0].weights(0, 0);
    CHECK(w == doctest::Approx(-0.01 / (1.0 + 1e-8)).epsilon(1e-15));
    CHECK(std::abs(w + 0.01) < 1e-9);
    CHECK(state.m[0].weights(0, 0) == doctest::Approx(0.1));
    CHECK(state.v[0].weights(0, 0) == doctest::Approx(0.001));
  }

  TEST_CASE("zero gradient leaves parameters bit-identical") {
    Rng rng(9);
    auto m = random_model(rng, {15, 15});
    const auto before = m;
    auto state = AdamState::for_model(m);
    Gradients g{zeros_like(m)};
    for (int i = 0; i < 5; ++i) adam_step(m, g, state, 0.01);
    CHECK(m == before);
    CHECK(state.t == 5);
  }

  TEST_CASE("first step magnitude is lr for any nonzero constant gradient") {
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
      auto m = random_model(rng, {15});
      const auto before = m;
      const double g0 = (uniform01(rng) < 0.5 ? -1 : 1) * std::pow(10.0, 4 * uniform01(rng) - 2);
      Gradients g{zeros_like(m)};
      for (auto& l : g.layers) {
        std::fill(l.weights.data.begin(), l.weights.data.end(), g0);
        std::fill(l.bias.begin(), l.bias.end(), g0);
      }
      auto state = AdamState::for_model(m);
      const double lr = 0.001;
      adam_step(m, g, state, lr);
      const auto a = oracle::flatten(m.layers), b = oracle::flatten(before.layers);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double step = std::abs(a[i] - b[i]);
        // Subtraction rounding in the parameter itself bounds the comparison.
        const double tol = lr * 1e-6 + 4 * std::numeric_limits<double>::epsilon() * std::abs(b[i]);
        REQUIRE(std::abs(step - lr * std::abs(g0) / (std::abs(g0) + 1e-8)) <= tol);
      }
    }
  }

  TEST_CASE("deterministic") {
    Rng rng(12);
    auto m = random_model(rng, {15, 15});
    Gradients g{zeros_like(m)};
    for (auto& l : g.layers)
      for (double& v : l.weights.data) v = uniform01(rng) - 0.5;
    auto m1 = m, m2 = m;
    auto s1 = AdamState::for_model(m), s2 = AdamState::for_model(m);
    for (int i = 0; i < 3; ++i) {
      adam_step(m1, g, s1, 0.01);
      adam_step(m2, g, s2, 0.01);
    }
    CHECK(m1 == m2);
  }

  TEST_CASE("non-finite gradient is named and nothing moves") {
    auto m = single();
    const auto before = m;
    auto state = AdamState::for_model(m);
    Gradients g{zeros_like(m)};
    g.layers[1].bias[1] = std::numeric_limits<double>::quiet_NaN();
    try {
      adam_step(m, g, state, 0.01);
      FAIL("expected TrainingDiverged");
    } catch (const TrainingDiverged& e) {
      CHECK(std::string(e.what()).find("layer 2 bias[1]") != std::string::npos);
    }
    CHECK(m == before);
    CHECK(state.t == 0);
  }

  TEST_CASE("bad learning rate or shapes") {
    auto m = single();
    auto state = AdamState::for_model(m);
    Gradients g{zeros_like(m)};
    CHECK_THROWS_AS(adam_step(m, g, state, 0.0), ConfigError);
    Gradients wrong{zeros_like(zero_model({8}))};
    CHECK_THROWS_AS(adam_step(m, wrong, state, 0.01), ConfigError);
  }
}

TEST_SUITE("predict") {
  TEST_CASE("argmax and confidence") {
    auto m = zero_model();
    m.layers.back().bias = {0.0, std::log(4.0)};  // p = [0.2, 0.8]
    auto p = predict(m, std::vector<double>(15, 0.3));
    CHECK(p.label == kSarcastic);
    CHECK(p.confidence == doctest::Approx(0.8).epsilon(1e-12));
  }

  TEST_CASE("tie goes to non-sarcastic") {
    auto m = zero_model();
    Rng rng(13);
    auto p = predict(m, random_input(rng));
    CHECK(p.label == kNotSarcastic);
    CHECK(p.confidence == 0.5);
  }
}

TEST_SUITE("model file") {
  TEST_CASE("save/load/predict is bit-identical") {
    sarcasm::testing::TempDir dir;
    Rng rng(14);
    auto m = random_model(rng, {15, 15});
    save_model(m, dir / "m.model", {{"note", "test"}});
    auto loaded = load_model(dir / "m.model");
    CHECK(loaded == m);
    for (int i = 0; i < 1000; ++i) {
      const auto x = random_input(rng);
      const auto a = forward(m, x, Mode::Infer), b = forward(loaded, x, Mode::Infer);
      REQUIRE(a.probs == b.probs);
    }
  }

  TEST_CASE("hex floats round-trip exactly") {
    Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
      const double v = (uniform01(rng) - 0.5) * std::pow(10.0, 20 * uniform01(rng) - 10);
      REQUIRE(parse_hex_double(hex_double(v)) == v);
    }
    CHECK_THROWS_AS(parse_hex_double("0x1.8p+1garbage"), DataError);
  }

  TEST_CASE("loader rejects mismatches") {
    sarcasm::testing::TempDir dir;
    auto m = zero_model({9});
    auto j = model_to_json(m);
    auto bad_version = j;
    bad_version["version"] = 2;
    CHECK_THROWS_AS(model_from_json(bad_version), DataError);
    auto bad_shape = j;
    bad_shape["layers"][0]["rows"] = 10;
    CHECK_THROWS_AS(model_from_json(bad_shape), DataError);
    auto bad_len = j;
    bad_len["layers"][1]["bias"].erase(0);
    CHECK_THROWS_AS(model_from_json(bad_len), DataError);
    auto bad_hidden = j;
    bad_hidden["config"]["hidden"] = {30};
    CHECK_THROWS_AS(model_from_json(bad_hidden), DataError);
    auto bad_format = j;
    bad_format["format"] = "other";
    CHECK_THROWS_AS(model_from_json(bad_format), DataError);
    sarcasm::testing::write_file(dir / "junk.model", "{not json");
    CHECK_THROWS_AS(load_model(dir / "junk.model"), DataError);
    CHECK_NOTHROW(model_from_json(j));
  }
}
