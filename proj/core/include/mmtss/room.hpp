// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_ROOM_HPP_
#define MMTSS_ROOM_HPP_

#include <vector>

#include <Eigen/Core>

#include "mmtss/waveform.hpp"

namespace mmtss {

// Shoebox room with a single broadband reverberation time.
struct RoomSpec {
  Eigen::Vector3d size = {5.0, 4.0, 3.0};  // meters, (x, y, z)
  double t60 = 0.3;                        // seconds
  double sound_speed = 343.0;              // m/s

  double volume() const { return size.x() * size.y() * size.z(); }
  double surface() const {
    return 2.0 * (size.x() * size.y() + size.x() * size.z() + size.y() * size.z());
  }
  void validate() const;
};

enum class AbsorptionModel {
  // alpha = 0.161 * V / (S * T60); infeasible when alpha >= 1.
  kSabine,
  // alpha = 1 - exp(-0.161 * V / (S * T60)); always feasible, and the
  // decay measured on the simulated RIR tracks the requested T60.
  kEyring,
};

// Sabine absorption coefficient; throws InfeasibleT60Error when the
// requested T60 needs alpha >= 1.
double sabine_absorption(const RoomSpec& room);

// Uniform wall reflection coefficient beta = sqrt(1 - alpha).
double t60_to_reflectivity(const RoomSpec& room,
                           AbsorptionModel model = AbsorptionModel::kSabine);

// Per-axis reflection coefficients chosen so each axis of the image
// lattice decays at 60/T60 dB/s:
//   beta_d = 10^(-3 * L_d / (c * T60 * kappa)).
// With a uniform beta the measured decay is dominated by the longest
// room axis and overshoots the request by up to ~50%; equalizing the
// axes keeps the Schroeder estimate within ~15% across the sampled room
// range. kappa = 1.10 compensates the faster early decay of oblique
// image paths.
Eigen::Vector3d axial_reflectivities(const RoomSpec& room);

enum class RirReflectionModel { kSabineUniform, kEyringUniform, kAxialDecay };

// Per-axis image orders for the shoebox expansion.
struct ImageOrder {
  int x = 0;
  int y = 0;
  int z = 0;
  static ImageOrder uniform(int n) { return {n, n, n}; }
};

// Smallest uniform order whose image shell drops below -60 dB of the
// direct path, capped at 12; the cap bounds the cost of long tails.
int choose_max_order(const RoomSpec& room, double beta, double direct_distance);

// Per-axis orders large enough that the image cloud covers a decay of
// `decay_db` for the room's T60; used when measuring decay curves.
ImageOrder order_for_decay(const RoomSpec& room, double decay_db);

// Image-source RIR with explicit reflectivity. Every image (p, q, r)
// with |p| <= order.x etc. contributes beta^(|p|+|q|+|r|) / (4*pi*d) at
// fractional delay d/c*fs through an 81-tap Hann-windowed sinc.
// The result is truncated or zero-padded to `length` samples.
std::vector<double> image_source_rir(const Eigen::Vector3d& room_size, double beta,
                                     const Eigen::Vector3d& src, const Eigen::Vector3d& mic,
                                     int sample_rate, double sound_speed, ImageOrder order,
                                     size_t length);

// Per-axis reflectivity variant: the image with axis hit counts
// (p, q, r) contributes beta_x^|p| * beta_y^|q| * beta_z^|r| / (4*pi*d).
std::vector<double> image_source_rir(const Eigen::Vector3d& room_size,
                                     const Eigen::Vector3d& beta_xyz,
                                     const Eigen::Vector3d& src, const Eigen::Vector3d& mic,
                                     int sample_rate, double sound_speed, ImageOrder order,
                                     size_t length);

// Reflectivity derived from room.t60; the axial-decay model is the
// default because its measured T60 tracks the request.
std::vector<double> simulate_rir(const RoomSpec& room, const Eigen::Vector3d& src,
                                 const Eigen::Vector3d& mic, int sample_rate, int max_order,
                                 size_t length,
                                 RirReflectionModel model = RirReflectionModel::kAxialDecay);
std::vector<double> simulate_rir(const RoomSpec& room, const Eigen::Vector3d& src,
                                 const Eigen::Vector3d& mic, int sample_rate, ImageOrder order,
                                 size_t length,
                                 RirReflectionModel model = RirReflectionModel::kAxialDecay);

// t60 * fs + 4096 samples.
size_t default_rir_length(const RoomSpec& room, int sample_rate);

// Convolve a single-channel source with one RIR per microphone; output
// channel u has length L + |rir_u| - 1 (all RIRs must share a length).
MultiChannelWaveform apply_rir(const MultiChannelWaveform& wave,
                               const std::vector<std::vector<double>>& rirs);

}  // namespace mmtss

#endif  // MMTSS_ROOM_HPP_
