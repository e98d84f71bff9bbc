// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/manifest.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

using nlohmann::json;

json range_to_json(const ValueRange& r) { return json{{"min", r.min}, {"max", r.max}}; }

ValueRange range_from_json(const json& j) {
  return ValueRange{j.at("min").get<double>(), j.at("max").get<double>()};
}

void check_range(const ValueRange& r, const char* name, bool positive) {
  if (r.min > r.max) throw ValidationError(std::string("manifest: empty range for ") + name);
  if (positive && r.min <= 0.0) {
    throw ValidationError(std::string("manifest: ") + name + " must be positive");
  }
}

}  // namespace

void SimulationManifest::validate() const {
  if (count < 0) throw ValidationError("manifest: count must be non-negative");
  if (sample_rate <= 0) throw ValidationError("manifest: sample rate must be positive");
  double total = 0.0;
  for (double w : speaker_count_weights) {
    if (w < 0.0) throw ValidationError("manifest: negative speaker count weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("manifest: speaker count weights must sum to 1");
  }
  check_range(room_x, "room_x", true);
  check_range(room_y, "room_y", true);
  check_range(room_z, "room_z", true);
  check_range(t60, "t60", true);
  check_range(sir_db, "sir_db", false);
  if (snr_db) check_range(*snr_db, "snr_db", false);
  check_range(source_distance, "source_distance", true);
  if (wall_margin < 0.0) throw ValidationError("manifest: negative wall margin");
  if (sources.empty()) throw ValidationError("manifest: empty source listing");
  if (snr_db && noises.empty()) {
    throw ValidationError("manifest: snr_db set but noise listing is empty");
  }
}

std::string manifest_to_json(const SimulationManifest& m) {
  json j;
  j["base_seed"] = m.base_seed;
  j["count"] = m.count;
  j["sample_rate"] = m.sample_rate;
  j["speaker_count_weights"] = m.speaker_count_weights;
  j["room_x"] = range_to_json(m.room_x);
  j["room_y"] = range_to_json(m.room_y);
  j["room_z"] = range_to_json(m.room_z);
  j["t60"] = range_to_json(m.t60);
  j["sir_db"] = range_to_json(m.sir_db);
  j["snr_db"] = m.snr_db ? range_to_json(*m.snr_db) : json(nullptr);
  j["source_distance"] = range_to_json(m.source_distance);
  j["wall_margin"] = m.wall_margin;
  j["sources"] = m.sources;
  j["noises"] = m.noises;
  return j.dump(2);
}

SimulationManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }

  SimulationManifest m;
  try {
    m.base_seed = j.at("base_seed").get<uint64_t>();
    m.count = j.at("count").get<int>();
    if (j.contains("sample_rate")) m.sample_rate = j.at("sample_rate").get<int>();
    if (j.contains("speaker_count_weights")) {
      m.speaker_count_weights = j.at("speaker_count_weights").get<std::array<double, 3>>();
    }
    if (j.contains("room_x")) m.room_x = range_from_json(j.at("room_x"));
    if (j.contains("room_y")) m.room_y = range_from_json(j.at("room_y"));
    if (j.contains("room_z")) m.room_z = range_from_json(j.at("room_z"));
    if (j.contains("t60")) m.t60 = range_from_json(j.at("t60"));
    if (j.contains("sir_db")) m.sir_db = range_from_json(j.at("sir_db"));
    if (j.contains("snr_db")) {
      m.snr_db = j.at("snr_db").is_null()
                     ? std::nullopt
                     : std::optional<ValueRange>(range_from_json(j.at("snr_db")));
    }
    if (j.contains("source_distance")) {
      m.source_distance = range_from_json(j.at("source_distance"));
    }
    if (j.contains("wall_margin")) m.wall_margin = j.at("wall_margin").get<double>();
    m.sources = j.at("sources").get<std::vector<std::string>>();
    if (j.contains("noises")) m.noises = j.at("noises").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

SimulationManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("manifest: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return manifest_from_json(text);
}

void save_manifest(const std::filesystem::path& path, const SimulationManifest& manifest) {
  manifest.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("manifest: cannot open for writing: " + path.string());
  out << manifest_to_json(manifest) << "\n";
}

}  // namespace mmtss
