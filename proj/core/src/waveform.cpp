// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/waveform.hpp"

#include "mmtss/errors.hpp"

namespace mmtss {

void MultiChannelWaveform::validate() const {
  if (samples.rows() < 1 || samples.cols() < 1) {
    throw ValidationError("waveform must have at least 1 channel and 1 sample");
  }
  if (sample_rate <= 0) {
    throw ValidationError("waveform sample rate must be positive");
  }
  if (!samples.allFinite()) {
    throw ValidationError("waveform contains non-finite samples");
  }
}

MultiChannelWaveform make_waveform(Eigen::MatrixXd samples, int sample_rate) {
  MultiChannelWaveform wave{std::move(samples), sample_rate};
  wave.validate();
  return wave;
}

Eigen::VectorXd channel(const MultiChannelWaveform& wave, Eigen::Index u) {
  if (u < 0 || u >= wave.channels()) {
    throw ValidationError("channel index out of range");
  }
  return wave.samples.row(u).transpose();
}

MultiChannelWaveform mono(Eigen::VectorXd samples, int sample_rate) {
  MultiChannelWaveform wave;
  wave.samples = samples.transpose();
  wave.sample_rate = sample_rate;
  wave.validate();
  return wave;
}

}  // namespace mmtss
