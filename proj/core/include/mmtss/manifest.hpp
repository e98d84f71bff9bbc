// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_MANIFEST_HPP_
#define MMTSS_MANIFEST_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mmtss {

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const { return v >= min && v <= max; }
};

// Declarative description of one simulated dataset. Every sampled
// quantity has an explicit range so experiments are diffable; the
// defaults follow the standard far-field setup: speaker counts weighted
// 49/29/22, SIR in [-6, 6] dB, rooms from 4x4x2.5 m to 10x8x6 m, T60 in
// [0.05, 0.7] s, source distance in [1, 5] m and noise at [18, 30] dB
// SNR.
struct SimulationManifest {
  uint64_t base_seed = 0;
  int count = 0;
  int sample_rate = 16000;
  std::array<double, 3> speaker_count_weights = {0.49, 0.29, 0.22};
  ValueRange room_x{4.0, 10.0};
  ValueRange room_y{4.0, 8.0};
  ValueRange room_z{2.5, 6.0};
  ValueRange t60{0.05, 0.7};
  ValueRange sir_db{-6.0, 6.0};
  // nullopt disables additive noise entirely.
  std::optional<ValueRange> snr_db = ValueRange{18.0, 30.0};
  ValueRange source_distance{1.0, 5.0};
  double wall_margin = 0.3;
  std::vector<std::string> sources;  // single-channel WAV paths
  std::vector<std::string> noises;   // WAV paths; looped when too short

  // Weights sum to 1 +- 1e-9, ranges are non-empty and positive where
  // required, noise listing is present whenever snr_db is set.
  void validate() const;
};

SimulationManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const SimulationManifest& manifest);

// JSON text used for both files and index headers.
std::string manifest_to_json(const SimulationManifest& manifest);
SimulationManifest manifest_from_json(const std::string& text);

}  // namespace mmtss

#endif  // MMTSS_MANIFEST_HPP_
