#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sarcasm/metrics.hpp"
#include "sarcasm/training.hpp"

namespace sarcasm {

struct StarResult {
  int stars = 0;
  ConfusionMatrix cm;
  ClassMetrics metrics;
  std::size_t excluded = 0;
  std::vector<HistoryRecord> history;
};

struct EvalReport {
  std::vector<StarResult> per_star;  // ascending by stars
  std::optional<MacroAverage> macro;  // set when all five stars are present
  nlohmann::json provenance;          // version, seed, config and corpus digests
};

// Sorts per_star and fills macro when every star category is present.
EvalReport make_report(std::vector<StarResult> per_star, nlohmann::json provenance);

// Precision/Recall/F1 rows by star column, two decimals, followed by an
// accuracy-per-star line.
std::string render_table(const EvalReport& report);

// Full-precision machine-readable form.
nlohmann::json report_to_json(const EvalReport& report);

nlohmann::json history_to_json(const HistoryRecord& h);
// One JSON record per (stage, epoch), preceded by a {"provenance": ...}
// record when provenance is non-null.
void write_history(const std::vector<HistoryRecord>& history,
                   const std::filesystem::path& path,
                   const nlohmann::json& provenance = nullptr);
std::vector<HistoryRecord> read_history(const std::filesystem::path& path);

}  // namespace sarcasm
