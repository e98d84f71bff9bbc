// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/spatial_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

constexpr double kLpsEpsilon = 1e-8;
constexpr double kPi = std::numbers::pi;

}  // namespace

void FeatureMap::validate() const {
  if (planes.empty()) throw ValidationError("feature map: no planes");
  const Eigen::Index t = planes.front().rows();
  const Eigen::Index f = planes.front().cols();
  for (const auto& p : planes) {
    if (p.rows() != t || p.cols() != f) {
      throw ValidationError("feature map: ragged plane shapes");
    }
    if (!p.allFinite()) throw ValidationError("feature map: non-finite values");
  }
  if ((kind == FeatureKind::kLps || kind == FeatureKind::kDf) && planes.size() != 1) {
    throw ValidationError("feature map: LPS/DF must hold exactly one plane");
  }
}

FeatureMap compute_lps(const ComplexSpectrogram& spec) {
  spec.validate();
  const Eigen::MatrixXcd& ref = spec.channels.front();
  FeatureMap out;
  out.kind = FeatureKind::kLps;
  out.planes.emplace_back((ref.cwiseAbs2().array() + kLpsEpsilon).log().matrix());
  return out;
}

FeatureMap compute_ipd(const ComplexSpectrogram& spec, const ArrayGeometry& geom) {
  spec.validate();
  geom.validate();
  if (geom.mic_count() > spec.channel_count()) {
    throw ValidationError("ipd: spectrogram has fewer channels than the geometry");
  }

  FeatureMap out;
  out.kind = FeatureKind::kIpd;
  out.planes.reserve(geom.pairs.size());
  for (const auto& [m1, m2] : geom.pairs) {
    const Eigen::MatrixXcd& a = spec.channels[static_cast<size_t>(m1)];
    const Eigen::MatrixXcd& b = spec.channels[static_cast<size_t>(m2)];
    Eigen::MatrixXd plane(a.rows(), a.cols());
    for (Eigen::Index t = 0; t < a.rows(); ++t) {
      for (Eigen::Index f = 0; f < a.cols(); ++f) {
        // arg(a * conj(b)) is the wrapped phase difference; atan2 returns
        // [-pi, pi], so only the -pi edge needs remapping.
        double v = std::arg(a(t, f) * std::conj(b(t, f)));
        if (v <= -kPi) v = kPi;
        plane(t, f) = v;
      }
    }
    out.planes.push_back(std::move(plane));
  }
  return out;
}

Eigen::MatrixXd compute_tpd(const ArrayGeometry& geom, double theta_deg, int freq_bins) {
  geom.validate();
  if (theta_deg < 0.0 || theta_deg > 180.0) {
    throw ValidationError("tpd: theta must be within [0, 180] degrees");
  }
  if (freq_bins < 1) throw ValidationError("tpd: freq_bins must be >= 1");

  const int fft_size = 2 * (freq_bins - 1);
  const double cos_theta = std::cos(theta_deg * kPi / 180.0);
  Eigen::MatrixXd tpd(geom.pair_count(), freq_bins);
  for (int m = 0; m < geom.pair_count(); ++m) {
    for (int f = 0; f < freq_bins; ++f) {
      const double f_hz =
          fft_size > 0 ? static_cast<double>(f) * geom.sample_rate / fft_size : 0.0;
      tpd(m, f) = 2.0 * kPi * f_hz * geom.spacings[static_cast<size_t>(m)] * cos_theta /
                  geom.sound_speed;
    }
  }
  return tpd;
}

FeatureMap compute_df(const FeatureMap& ipd, const Eigen::MatrixXd& tpd) {
  ipd.validate();
  if (ipd.kind != FeatureKind::kIpd) throw ValidationError("df: input must be IPD");
  if (tpd.rows() != ipd.plane_count() || tpd.cols() != ipd.bins()) {
    throw ValidationError("df: TPD shape does not match the IPD feature");
  }

  FeatureMap out;
  out.kind = FeatureKind::kDf;
  Eigen::MatrixXd plane = Eigen::MatrixXd::Zero(ipd.frames(), ipd.bins());
  for (int m = 0; m < ipd.plane_count(); ++m) {
    const Eigen::MatrixXd& phase = ipd.planes[static_cast<size_t>(m)];
    for (Eigen::Index t = 0; t < plane.rows(); ++t) {
      for (Eigen::Index f = 0; f < plane.cols(); ++f) {
        plane(t, f) += std::cos(tpd(m, f) - phase(t, f));
      }
    }
  }
  out.planes.push_back(std::move(plane));
  return out;
}

FeatureMap premask_df(const FeatureMap& df) {
  df.validate();
  if (df.kind != FeatureKind::kDf) throw ValidationError("premask: input must be DF");

  const Eigen::MatrixXd& plane = df.planes.front();
  std::vector<double> values(plane.data(), plane.data() + plane.size());
  const size_t n = values.size();
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
  double median = values[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
    median = 0.5 * (median + lower);
  }

  FeatureMap out;
  out.kind = FeatureKind::kDf;
  out.planes.emplace_back(
      (plane.array() < median).select(Eigen::MatrixXd::Zero(plane.rows(), plane.cols()), plane));
  return out;
}

Eigen::MatrixXd stack_features(const FeatureMap& lps, const FeatureMap& ipd,
                               const FeatureMap& df) {
  lps.validate();
  ipd.validate();
  df.validate();
  if (lps.kind != FeatureKind::kLps || ipd.kind != FeatureKind::kIpd ||
      df.kind != FeatureKind::kDf) {
    throw ValidationError("stack: expected LPS, IPD, DF in that order");
  }
  const Eigen::Index T = lps.frames();
  const Eigen::Index F = lps.bins();
  if (ipd.frames() != T || ipd.bins() != F || df.frames() != T || df.bins() != F) {
    throw ValidationError("stack: feature shapes disagree");
  }

  const int planes = 2 + ipd.plane_count();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(planes) * F, T);
  stacked.topRows(F) = lps.planes.front().transpose();
  for (int m = 0; m < ipd.plane_count(); ++m) {
    stacked.middleRows((1 + m) * F, F) = ipd.planes[static_cast<size_t>(m)].transpose();
  }
  stacked.bottomRows(F) = df.planes.front().transpose();
  return stacked;
}

}  // namespace mmtss
