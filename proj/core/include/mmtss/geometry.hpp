// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_GEOMETRY_HPP_
#define MMTSS_GEOMETRY_HPP_

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mmtss {

// Microphone layout plus the pair selection used for phase features.
// Pair (m1, m2) contributes angle(Y^m1) - angle(Y^m2); with the default
// layout the axis points from the last microphone toward the first, so a
// source at 0 degrees (endfire) sits off the mic-1 end of the line.
struct ArrayGeometry {
  std::vector<Eigen::Vector3d> positions;           // meters, one per mic
  std::vector<std::pair<int, int>> pairs;           // 0-based indices
  std::vector<double> spacings;                     // |pos(m1) - pos(m2)| per pair
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();  // unit vector of the line
  double sound_speed = 343.0;                       // m/s
  int sample_rate = 16000;                          // Hz

  int mic_count() const { return static_cast<int>(positions.size()); }
  int pair_count() const { return static_cast<int>(pairs.size()); }
  Eigen::Vector3d center() const;

  // Pairs in range, distinct indices, spacings consistent with the
  // positions within 1e-9.
  void validate() const;
};

// 9-element non-uniform line with consecutive gaps 4-3-2-1-1-2-3-4 cm,
// centered at the origin along +x, and phase pairs
// (1,9), (1,5), (2,5), (5,7), (5,6) in 1-based numbering.
ArrayGeometry default_array_geometry(int sample_rate = 16000);

// Geometry translated/rotated so the local x axis maps onto `axis` and
// the center lands at `center`; used when placing the array in a room.
ArrayGeometry place_geometry(const ArrayGeometry& local, const Eigen::Vector3d& center,
                             const Eigen::Vector3d& axis);

// Angle between the array axis and the direction to `source`, in
// [0, 180] degrees; 0 is endfire toward mic 1, 90 is broadside.
double source_angle(const ArrayGeometry& geom, const Eigen::Vector3d& source);

// Smallest |theta_target - theta_interferer|; empty list means a
// 1-speaker scene and returns nullopt.
std::optional<double> angle_difference(double target_theta_deg,
                                       const std::vector<double>& interferer_thetas_deg);

}  // namespace mmtss

#endif  // MMTSS_GEOMETRY_HPP_
