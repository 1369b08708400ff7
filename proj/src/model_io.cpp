#include "sarcasm/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "sarcasm/errors.hpp"

namespace sarcasm {

using nlohmann::json;

std::string hex_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw DataError("invalid float literal '" + s + "'");
  return v;
}

namespace {

json encode(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(hex_double(v));
  return arr;
}

std::vector<double> decode(const json& arr, std::size_t expected, const char* what) {
  if (!arr.is_array() || arr.size() != expected)
    throw DataError(std::string("model file: ") + what + " has wrong length");
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    const double d = parse_hex_double(v.get<std::string>());
    if (!std::isfinite(d)) throw DataError(std::string("model file: non-finite ") + what);
    out.push_back(d);
  }
  return out;
}

}  // namespace

json model_to_json(const MlpModel& model, const json& provenance) {
  const auto& c = model.config;
  json layers = json::array();
  for (const auto& l : model.layers)
    layers.push_back({{"rows", l.weights.rows},
                      {"cols", l.weights.cols},
                      {"weights", encode(l.weights.data)},
                      {"bias", encode(l.bias)}});
  return {{"format", "sarcasm-mlp"},
          {"version", kModelFormatVersion},
          {"config",
           {{"input_dim", c.input_dim},
            {"hidden", c.hidden},
            {"output_dim", c.output_dim},
            {"keep_prob", hex_double(c.keep_prob)},
            {"seed", c.seed}}},
          {"layers", layers},
          {"provenance", provenance}};
}

MlpModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "sarcasm-mlp")
      throw DataError("model file: unknown format");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw DataError("model file: version " + std::to_string(version) +
                      " unsupported (expected " + std::to_string(kModelFormatVersion) + ")");
    MlpModel model;
    const auto& c = j.at("config");
    model.config.input_dim = c.at("input_dim").get<std::size_t>();
    model.config.hidden = c.at("hidden").get<std::vector<std::size_t>>();
    model.config.output_dim = c.at("output_dim").get<std::size_t>();
    model.config.keep_prob = parse_hex_double(c.at("keep_prob").get<std::string>());
    model.config.seed = c.at("seed").get<std::uint64_t>();
    try {
      model.config.validate();
    } catch (const ConfigError& e) {
      throw DataError(std::string("model file: ") + e.what());
    }

    std::vector<std::size_t> widths = model.config.hidden;
    widths.push_back(model.config.output_dim);
    const auto& layers = j.at("layers");
    if (!layers.is_array() || layers.size() != widths.size())
      throw DataError("model file: layer count does not match config");
    std::size_t fan_in = model.config.input_dim;
    for (std::size_t l = 0; l < widths.size(); ++l) {
      const auto& lj = layers[l];
      const auto rows = lj.at("rows").get<std::size_t>();
      const auto cols = lj.at("cols").get<std::size_t>();
      if (rows != widths[l] || cols != fan_in)
        throw DataError("model file: layer " + std::to_string(l + 1) + " shape " +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        " does not match config");
      Layer layer{Matrix(rows, cols), {}};
      layer.weights.data = decode(lj.at("weights"), rows * cols, "weights");
      layer.bias = decode(lj.at("bias"), rows, "bias");
      model.layers.push_back(std::move(layer));
      fan_in = rows;
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

void save_model(const MlpModel& model, const std::filesystem::path& path,
                const json& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << model_to_json(model, provenance).dump(1) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("model file " + path.string() + " is not valid JSON");
  return model_from_json(j);
}

}  // namespace sarcasm
