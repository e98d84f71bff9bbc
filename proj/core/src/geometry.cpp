// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/geometry.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "mmtss/errors.hpp"

namespace mmtss {

Eigen::Vector3d ArrayGeometry::center() const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& p : positions) c += p;
  return c / static_cast<double>(positions.size());
}

void ArrayGeometry::validate() const {
  if (positions.empty()) throw ValidationError("geometry: no microphones");
  if (pairs.size() != spacings.size()) {
    throw ValidationError("geometry: pair/spacing count mismatch");
  }
  if (sound_speed <= 0.0 || sample_rate <= 0) {
    throw ValidationError("geometry: sound speed and sample rate must be positive");
  }
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw ValidationError("geometry: axis must be a unit vector");
  }
  const int u = mic_count();
  for (size_t m = 0; m < pairs.size(); ++m) {
    const auto [m1, m2] = pairs[m];
    if (m1 < 0 || m1 >= u || m2 < 0 || m2 >= u || m1 == m2) {
      throw ValidationError("geometry: pair index out of range");
    }
    const double dist = (positions[static_cast<size_t>(m1)] -
                         positions[static_cast<size_t>(m2)]).norm();
    if (std::abs(dist - spacings[m]) > 1e-9) {
      throw ValidationError("geometry: spacing inconsistent with positions");
    }
  }
}

ArrayGeometry default_array_geometry(int sample_rate) {
  // Mic 1 sits at +10 cm so that pair phases (m1 minus m2) match the
  // plane-wave delay of a source at angle theta from the +x axis.
  const double xs[9] = {0.10, 0.06, 0.03, 0.01, 0.0, -0.01, -0.03, -0.06, -0.10};
  ArrayGeometry geom;
  geom.positions.reserve(9);
  for (double x : xs) geom.positions.emplace_back(x, 0.0, 0.0);
  geom.pairs = {{0, 8}, {0, 4}, {1, 4}, {4, 6}, {4, 5}};
  for (const auto& [m1, m2] : geom.pairs) {
    geom.spacings.push_back((geom.positions[static_cast<size_t>(m1)] -
                             geom.positions[static_cast<size_t>(m2)]).norm());
  }
  geom.axis = Eigen::Vector3d::UnitX();
  geom.sample_rate = sample_rate;
  geom.validate();
  return geom;
}

ArrayGeometry place_geometry(const ArrayGeometry& local, const Eigen::Vector3d& center,
                             const Eigen::Vector3d& axis) {
  local.validate();
  const double norm = axis.norm();
  if (norm < 1e-12) throw ValidationError("geometry: zero-length axis");
  const Eigen::Vector3d unit = axis / norm;
  const Eigen::Quaterniond rot =
      Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitX(), unit);

  ArrayGeometry placed = local;
  const Eigen::Vector3d local_center = local.center();
  for (auto& p : placed.positions) p = center + rot * (p - local_center);
  placed.axis = unit;
  placed.validate();
  return placed;
}

double source_angle(const ArrayGeometry& geom, const Eigen::Vector3d& source) {
  const Eigen::Vector3d offset = source - geom.center();
  const double dist = offset.norm();
  if (dist < 1e-12) throw ValidationError("source coincides with the array center");
  const double cosine = std::clamp(offset.dot(geom.axis) / dist, -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

std::optional<double> angle_difference(double target_theta_deg,
                                       const std::vector<double>& interferer_thetas_deg) {
  if (interferer_thetas_deg.empty()) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (double theta : interferer_thetas_deg) {
    best = std::min(best, std::abs(target_theta_deg - theta));
  }
  return best;
}

}  // namespace mmtss
