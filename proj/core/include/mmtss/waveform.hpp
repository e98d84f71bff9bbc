// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_WAVEFORM_HPP_
#define MMTSS_WAVEFORM_HPP_

#include <Eigen/Core>

namespace mmtss {

// U-channel time-domain signal. samples(u, n) is channel u at sample n;
// values are real and normalized so that full scale is [-1, 1].
struct MultiChannelWaveform {
  Eigen::MatrixXd samples;  // [channels x length]
  int sample_rate = 0;      // Hz

  Eigen::Index channels() const { return samples.rows(); }
  Eigen::Index length() const { return samples.cols(); }
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(length()) / sample_rate : 0.0;
  }

  // Throws ValidationError unless U >= 1, L >= 1, rate > 0 and all
  // samples are finite.
  void validate() const;
};

MultiChannelWaveform make_waveform(Eigen::MatrixXd samples, int sample_rate);

// Single-channel view helpers.
Eigen::VectorXd channel(const MultiChannelWaveform& wave, Eigen::Index u);
MultiChannelWaveform mono(Eigen::VectorXd samples, int sample_rate);

}  // namespace mmtss

#endif  // MMTSS_WAVEFORM_HPP_
