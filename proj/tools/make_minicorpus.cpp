// Generates the bundled synthetic mini-corpus: seeded template reviews with
// known sarcasm markers, plus votes from four simulated annotators.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sarcasm/rng.hpp"

namespace {

using sarcasm::Rng;
using sarcasm::uniform01;
using sarcasm::uniform_below;

const std::vector<std::string> kSarcasticOpeners = {
    "Haha!", "Oh great.", "God!", "Wow,", "Yay...", "Gosh,", "Hahaha,", "Ugh, sure.",
    "Geez!", "Oh joy!!", "Lord...", "Well well well."};

const std::vector<std::string> kSarcasticBodies = {
    "I'm trying to imagine you with a personality!!",
    "Aren't we clever??",
    "Totally the BEST service ever!!",
    "We sooo loved waiting an hour for cold soup...",
    "Really, what a wonderful way to ruin our dinner?!",
    "Thanks for the stale fries, you are a genius!!",
    "Because nothing says fresh like a soggy bun...",
    "Sure, we absolutely love rude waiters!!",
    "Your manager was sooo helpful, said nobody ever.",
    "Can you believe how amazing that burnt toast was??",
    "Literally the most exciting forty minutes of our lives, staring at an empty table...",
    "Five dollars for tap water? What a bargain!!",
    "Oh you remembered our order, eventually?!",
    "Our steak was PERFECT, if you like shoe leather...",
    "Definitely the friendliest scowl in town!!",
};

const std::vector<std::string> kSarcasticClosers = {
    "", "Would totally come back... not.", "Bravo, really.", "Can't wait to return!!",
    "Just perfect.", "We'll be back?? Sure."};

const std::vector<std::string> kPlainBodies = {
    "The food was good and the staff were friendly.",
    "Service was slow but the pasta was fresh.",
    "Parking is limited on weekends.",
    "I ordered the burger and fries and they arrived hot.",
    "Prices are fair for the portion size.",
    "The room was clean and quiet.",
    "Our waiter was attentive and explained the menu.",
    "The coffee was bitter and the muffin was dry.",
    "Delivery took about thirty minutes.",
    "The patio has a nice view of the river.",
    "They were out of the salmon, so I had the chicken.",
    "The lobby smelled a bit musty.",
    "Breakfast is served until eleven.",
    "My haircut was done quickly and looks fine.",
    "The noodles were a little salty for my taste.",
    "Staff fixed the billing problem without fuss.",
};

const std::vector<std::string> kPlainClosers = {
    "", "Would come back!", "Recommended.", "Probably not returning.", "Decent overall.",
    "Amazing tacos!!"};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform_below(rng, v.size())];
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string sarcastic_text(Rng& rng) {
  // A minority of sarcastic reviews are subtle: plain body, one marker.
  if (uniform01(rng) < 0.15) return join({pick(rng, kPlainBodies), pick(rng, kSarcasticOpeners)});
  const std::string opener = uniform01(rng) < 0.7 ? pick(rng, kSarcasticOpeners) : "";
  return join({opener, pick(rng, kSarcasticBodies), pick(rng, kPlainBodies),
               pick(rng, kSarcasticClosers)});
}

std::string plain_text(Rng& rng) {
  const std::string first = pick(rng, kPlainBodies);
  std::string second = uniform01(rng) < 0.6 ? pick(rng, kPlainBodies) : "";
  if (second == first) second.clear();
  return join({first, second, pick(rng, kPlainClosers)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic mini-corpus"};
  std::string out_dir = "data/minicorpus";
  std::size_t per_star = 100;
  std::uint64_t seed = 2018;
  double agreement = 0.85;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--per-star", per_star, "Reviews per star category")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  app.add_option("--agreement", agreement, "Probability an annotator votes the true label")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  // Sarcastic share per star, higher for the extremes and the middle.
  constexpr std::array<double, 5> kSarcasticShare = {0.55, 0.35, 0.45, 0.30, 0.40};
  const std::array<std::string, 4> annotators = {"a1", "a2", "a3", "a4"};

  std::filesystem::create_directories(out_dir);
  std::ofstream reviews(std::filesystem::path(out_dir) / "reviews.jsonl", std::ios::binary);
  std::ofstream labels(std::filesystem::path(out_dir) / "labels.jsonl", std::ios::binary);
  if (!reviews || !labels) {
    std::cerr << "cannot write to " << out_dir << '\n';
    return 2;
  }

  Rng rng(seed);
  for (int star = 1; star <= 5; ++star) {
    for (std::size_t i = 0; i < per_star; ++i) {
      const std::string id = "s" + std::to_string(star) + "-" + std::to_string(i + 1);
      const bool sarcastic = uniform01(rng) < kSarcasticShare[star - 1];
      const std::string text = sarcastic ? sarcastic_text(rng) : plain_text(rng);
      reviews << nlohmann::json{{"review_id", id}, {"stars", star}, {"text", text}}.dump()
              << '\n';
      for (const auto& a : annotators) {
        const bool vote = uniform01(rng) < agreement ? sarcastic : !sarcastic;
        labels << nlohmann::json{{"review_id", id}, {"sarcastic", vote}, {"annotator", a}}.dump()
               << '\n';
      }
    }
  }
  return 0;
}
