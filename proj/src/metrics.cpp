#include "sarcasm/metrics.hpp"

#include <string>

#include "sarcasm/errors.hpp"

namespace sarcasm {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionMatrix::add(int predicted, int actual) {
  if (predicted == 1)
    ++(actual == 1 ? tp : fp);
  else
    ++(actual == 1 ? fn : tn);
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

ClassMetrics prf1(const ConfusionMatrix& cm) {
  ClassMetrics m;
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.f1 = f1_score(m.precision, m.recall);
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return m;
}

MacroAverage macro_average(std::span<const ClassMetrics> per_star) {
  if (per_star.size() != 5)
    throw ConfigError("macro average needs 5 star categories, got " +
                      std::to_string(per_star.size()));
  MacroAverage avg;
  for (const auto& m : per_star) {
    avg.precision += m.precision;
    avg.recall += m.recall;
    avg.f1 += m.f1;
  }
  avg.precision /= 5.0;
  avg.recall /= 5.0;
  avg.f1 /= 5.0;
  return avg;
}

}  // namespace sarcasm
