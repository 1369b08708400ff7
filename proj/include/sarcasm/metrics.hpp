#pragma once

#include <cstddef>
#include <span>

namespace sarcasm {

// Positive class is sarcastic.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  void add(int predicted, int actual);
  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Any 0/0 ratio is reported as 0; F1 is 0 when P + R = 0.
ClassMetrics prf1(const ConfusionMatrix& cm);

double f1_score(double precision, double recall);

struct MacroAverage {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Unweighted mean over exactly five star categories; throws ConfigError
// otherwise.
MacroAverage macro_average(std::span<const ClassMetrics> per_star);

}  // namespace sarcasm
