#include "sarcasm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sarcasm/errors.hpp"
#include "sarcasm/model_io.hpp"

namespace sarcasm {

using nlohmann::json;

EvalReport make_report(std::vector<StarResult> per_star, json provenance) {
  std::sort(per_star.begin(), per_star.end(),
            [](const StarResult& a, const StarResult& b) { return a.stars < b.stars; });
  EvalReport report{std::move(per_star), std::nullopt, std::move(provenance)};
  bool complete = report.per_star.size() == kNumStars;
  for (std::size_t i = 0; complete && i < report.per_star.size(); ++i)
    complete = report.per_star[i].stars == static_cast<int>(i) + 1;
  if (complete) {
    std::vector<ClassMetrics> metrics;
    for (const auto& s : report.per_star) metrics.push_back(s.metrics);
    report.macro = macro_average(metrics);
  }
  return report;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const StarResult* find_star(const EvalReport& r, int stars) {
  for (const auto& s : r.per_star)
    if (s.stars == stars) return &s;
  return nullptr;
}

}  // namespace

std::string render_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "Metric");
  out << buf;
  for (int s = 1; s <= kNumStars; ++s) {
    std::snprintf(buf, sizeof buf, "%8s", (std::to_string(s) + " star").c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%9s", "Average");
  out << buf << '\n';

  const auto row = [&](const char* name, double ClassMetrics::*field,
                       double MacroAverage::*avg) {
    std::snprintf(buf, sizeof buf, "%-10s", name);
    out << buf;
    for (int s = 1; s <= kNumStars; ++s) {
      const StarResult* r = find_star(report, s);
      std::snprintf(buf, sizeof buf, "%8s", r ? fixed2(r->metrics.*field).c_str() : "-");
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%9s",
                  report.macro ? fixed2((*report.macro).*avg).c_str() : "-");
    out << buf << '\n';
  };
  row("Precision", &ClassMetrics::precision, &MacroAverage::precision);
  row("Recall", &ClassMetrics::recall, &MacroAverage::recall);
  row("F1", &ClassMetrics::f1, &MacroAverage::f1);

  out << "Accuracy  ";
  for (int s = 1; s <= kNumStars; ++s) {
    const StarResult* r = find_star(report, s);
    if (r)
      std::snprintf(buf, sizeof buf, "%7.1f%%", 100.0 * r->metrics.accuracy);
    else
      std::snprintf(buf, sizeof buf, "%8s", "-");
    out << buf;
  }
  out << '\n';
  std::size_t excluded = 0;
  for (const auto& s : report.per_star) excluded += s.excluded;
  if (excluded > 0) out << "Excluded reviews: " << excluded << '\n';
  return out.str();
}

json history_to_json(const HistoryRecord& h) {
  return {{"stage_index", h.stage_index},
          {"stage", std::string(to_string(h.stage))},
          {"epoch", h.epoch},
          {"lr", h.lr},
          {"mean_loss", h.mean_loss},
          {"train_accuracy", h.train_accuracy},
          {"lr_hex", hex_double(h.lr)},
          {"mean_loss_hex", hex_double(h.mean_loss)}};
}

json report_to_json(const EvalReport& report) {
  json stars = json::array();
  for (const auto& s : report.per_star) {
    json history = json::array();
    for (const auto& h : s.history) history.push_back(history_to_json(h));
    stars.push_back({{"stars", s.stars},
                     {"confusion", {{"tp", s.cm.tp}, {"fp", s.cm.fp}, {"fn", s.cm.fn}, {"tn", s.cm.tn}}},
                     {"excluded", s.excluded},
                     {"precision", s.metrics.precision},
                     {"recall", s.metrics.recall},
                     {"f1", s.metrics.f1},
                     {"accuracy", s.metrics.accuracy},
                     {"history", history}});
  }
  json macro = nullptr;
  if (report.macro)
    macro = {{"precision", report.macro->precision},
             {"recall", report.macro->recall},
             {"f1", report.macro->f1}};
  return {{"per_star", stars}, {"macro", macro}, {"provenance", report.provenance}};
}

void write_history(const std::vector<HistoryRecord>& history,
                   const std::filesystem::path& path, const json& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  if (!provenance.is_null()) out << json{{"provenance", provenance}}.dump() << '\n';
  for (const auto& h : history) out << history_to_json(h).dump() << '\n';
}

std::vector<HistoryRecord> read_history(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<HistoryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("provenance")) continue;
      HistoryRecord h;
      h.stage_index = j.at("stage_index").get<std::size_t>();
      const auto stage = j.at("stage").get<std::string>();
      h.stage = stage == "sarcastic"      ? Stage::Kind::SarcasticOnly
                : stage == "nonsarcastic" ? Stage::Kind::NonSarcasticDominated
                                          : Stage::Kind::Main;
      h.epoch = j.at("epoch").get<std::size_t>();
      h.lr = parse_hex_double(j.at("lr_hex").get<std::string>());
      h.mean_loss = parse_hex_double(j.at("mean_loss_hex").get<std::string>());
      h.train_accuracy = j.at("train_accuracy").get<double>();
      out.push_back(h);
    } catch (const json::exception& e) {
      throw DataError("invalid history record in " + path.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sarcasm
