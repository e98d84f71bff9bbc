// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_MIXTURE_HPP_
#define MMTSS_MIXTURE_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mmtss/geometry.hpp"
#include "mmtss/manifest.hpp"
#include "mmtss/room.hpp"
#include "mmtss/waveform.hpp"

namespace mmtss {

struct Placement {
  std::vector<Eigen::Vector3d> mic_positions;
  std::vector<Eigen::Vector3d> source_positions;
};

// One simulated mixture with its ground truth. The stored components are
// already scaled (SIR, SNR and the common peak gain applied), so
// mixture == sum(reverberant_sources) + noise sample-exactly.
struct MixtureExample {
  MultiChannelWaveform mixture;                         // U channels
  std::vector<MultiChannelWaveform> reverberant_sources;  // scaled, U channels each
  Eigen::VectorXd noise;                                // scaled, identical on all channels
  int target_index = 0;
  std::vector<double> directions_deg;                   // per source
  std::vector<double> sir_db;                           // per interferer
  std::optional<double> snr_db;
  RoomSpec room;
  Placement placement;
  uint64_t base_seed = 0;
  uint64_t index = 0;
  double gain = 1.0;  // common normalization applied to every component
  std::vector<std::string> source_files;
  std::optional<std::string> noise_file;
  uint64_t noise_offset = 0;

  std::optional<double> angle_difference_deg() const;
  int speaker_count() const { return static_cast<int>(reverberant_sources.size()); }
};

// Scale `interferer` so the reference-channel power ratio to `target`
// equals sir_db.
MultiChannelWaveform scale_to_sir(const MultiChannelWaveform& target,
                                  const MultiChannelWaveform& interferer, double sir_db);

// Scale `noise` (single channel) to the requested SNR against the
// reference channel of `mix` and add it to every channel. +inf leaves
// the mix untouched. Noise shorter than the mix is tiled when allow_loop
// is set, otherwise rejected.
MultiChannelWaveform add_noise_at_snr(const MultiChannelWaveform& mix,
                                      const MultiChannelWaveform& noise, double snr_db,
                                      bool allow_loop = true);

// Runs the full synthesis chain for one dataset item: speaker count,
// source selection, SIR/room/T60/placement/noise/SNR draws, image-source
// RIRs, convolution, scaling and the final sum. Deterministic in
// (manifest.base_seed, index).
MixtureExample simulate_mixture(const SimulationManifest& manifest, uint64_t index);

}  // namespace mmtss

#endif  // MMTSS_MIXTURE_HPP_
