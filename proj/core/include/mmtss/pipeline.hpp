// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_PIPELINE_HPP_
#define MMTSS_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmtss/fusion.hpp"
#include "mmtss/metrics.hpp"
#include "mmtss/mixture.hpp"
#include "mmtss/spatial_features.hpp"
#include "mmtss/stft.hpp"

namespace mmtss {

// Stable example identifier, e.g. "ex_000042".
std::string example_id(uint64_t index);

// Ground truth stored next to each example's audio.
struct ExampleMetadata {
  std::string id;
  uint64_t index = 0;
  uint64_t base_seed = 0;
  int speaker_count = 0;
  int target_index = 0;
  std::vector<double> directions_deg;
  std::optional<double> angle_difference_deg;
  std::vector<double> sir_db;
  std::optional<double> snr_db;
  RoomSpec room;
  Placement placement;
  double gain = 1.0;
  std::vector<std::string> source_files;
  std::optional<std::string> noise_file;
  uint64_t noise_offset = 0;
  int sample_rate = 0;
  int64_t length = 0;
};

// Writes mixture.wav (float32, U channels), one reverberant reference
// source_<k>.wav per speaker and metadata.json. The metadata file is
// written last and doubles as the completion marker for resume.
void write_example(const std::filesystem::path& dir, const MixtureExample& example);
bool example_complete(const std::filesystem::path& dir);
ExampleMetadata read_example_metadata(const std::filesystem::path& dir);

struct DatasetIndex {
  SimulationManifest manifest;
  std::vector<std::string> ids;
};

void write_dataset_index(const std::filesystem::path& dataset_dir,
                         const SimulationManifest& manifest,
                         const std::vector<std::string>& ids);
DatasetIndex read_dataset_index(const std::filesystem::path& dataset_dir);

struct FeaturizeOptions {
  StftConfig stft;
  bool premask = true;
  // When enabled, IPD and DF rows of the stacked matrix are scaled by
  // the rule gate evaluated at the example's angle difference.
  bool gate = false;
  RuleAttentionParams gate_params;
};

struct ExampleFeatures {
  FeatureMap lps;
  FeatureMap ipd;
  FeatureMap df;
  Eigen::MatrixXd stacked;  // [(2 + M) * F x T]
};

// LPS + IPD + DF for one mixture given the target direction.
ExampleFeatures featurize_mixture(const MultiChannelWaveform& mixture,
                                  double target_theta_deg,
                                  std::optional<double> angle_difference_deg,
                                  const ArrayGeometry& geom, const FeaturizeOptions& options);

// Writes lps/ipd/df/feats MMTS tensors plus a small JSON sidecar.
void write_example_features(const std::filesystem::path& out_dir, const std::string& id,
                            const ExampleFeatures& features, const FeaturizeOptions& options,
                            double target_theta_deg);

struct OracleSeparationResult {
  MultiChannelWaveform estimate;  // single channel
  ScoreRecord record;
};

// stft -> oracle IRM -> mask -> istft against the stored references;
// scores the estimate against the reverberant target reference channel
// over the reconstruction-guarantee region.
OracleSeparationResult oracle_separate_example(const std::filesystem::path& example_dir,
                                               const StftConfig& config);

// SI-SDR/SDR with both signals cut to a common length minus `margin`
// samples at each end (the STFT edge region).
ScoreRecord score_estimate(const std::string& id, const Eigen::VectorXd& estimate,
                           const Eigen::VectorXd& reference, int margin,
                           const ExampleMetadata& meta);

std::string score_records_to_json(const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> score_records_from_json(const std::string& text);

}  // namespace mmtss

#endif  // MMTSS_PIPELINE_HPP_
