#pragma once

// Model file: JSON document with config, per-layer shapes and row-major
// parameters. Every double is written as a C99 hex-float string, so a
// save/load cycle is lossless.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sarcasm/network.hpp"

namespace sarcasm {

inline constexpr int kModelFormatVersion = 1;

std::string hex_double(double v);
// Throws DataError if s is not a complete floating-point literal.
double parse_hex_double(const std::string& s);

// provenance is stored verbatim under "provenance" (may be null).
nlohmann::json model_to_json(const MlpModel& model,
                             const nlohmann::json& provenance = nullptr);
MlpModel model_from_json(const nlohmann::json& j);

void save_model(const MlpModel& model, const std::filesystem::path& path,
                const nlohmann::json& provenance = nullptr);
// Rejects unknown formats, version mismatches and inconsistent shapes.
MlpModel load_model(const std::filesystem::path& path);

}  // namespace sarcasm
