// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_SPATIAL_FEATURES_HPP_
#define MMTSS_SPATIAL_FEATURES_HPP_

#include <vector>

#include <Eigen/Core>

#include "mmtss/geometry.hpp"
#include "mmtss/stft.hpp"

namespace mmtss {

enum class FeatureKind { kLps, kIpd, kDf };

// Real-valued T-F feature. LPS and DF hold one [T x F] plane; IPD holds
// one plane per microphone pair, ordered as geometry.pairs.
struct FeatureMap {
  FeatureKind kind = FeatureKind::kLps;
  std::vector<Eigen::MatrixXd> planes;

  Eigen::Index frames() const { return planes.empty() ? 0 : planes.front().rows(); }
  Eigen::Index bins() const { return planes.empty() ? 0 : planes.front().cols(); }
  int plane_count() const { return static_cast<int>(planes.size()); }
  void validate() const;
};

// ln(|Y^1|^2 + 1e-8) of the reference (first) channel.
FeatureMap compute_lps(const ComplexSpectrogram& spec);

// Per-pair phase differences angle(Y^m1) - angle(Y^m2), wrapped to
// (-pi, pi].
FeatureMap compute_ipd(const ComplexSpectrogram& spec, const ArrayGeometry& geom);

// Plane-wave phase delay per pair and frequency bin for a static source
// direction: 2*pi * f_hz * spacing * cos(theta) / c, with
// f_hz = bin * sample_rate / fft_size. Rows are pairs, columns bins.
Eigen::MatrixXd compute_tpd(const ArrayGeometry& geom, double theta_deg, int freq_bins);

// Directional feature: sum over pairs of cos(TPD - IPD); in [-M, M] and
// maximal when the observed phases match the steering direction.
FeatureMap compute_df(const FeatureMap& ipd, const Eigen::MatrixXd& tpd);

// Zeroes DF values strictly below the per-utterance median.
FeatureMap premask_df(const FeatureMap& df);

// [LPS | IPD pairs | DF] stacked to (2 + M) * F rows by T columns; with
// the default setup that is 7 * 257 = 1799 feature rows per frame.
Eigen::MatrixXd stack_features(const FeatureMap& lps, const FeatureMap& ipd,
                               const FeatureMap& df);

}  // namespace mmtss

#endif  // MMTSS_SPATIAL_FEATURES_HPP_
