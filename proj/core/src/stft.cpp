// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/stft.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "mmtss/errors.hpp"
#include "mmtss/fft.hpp"
#include "mmtss/tensor_io.hpp"

namespace mmtss {

void StftConfig::validate() const {
  if (window_length < 2 || window_length % 2 != 0) {
    throw ValidationError("stft: window length must be even and >= 2");
  }
  if (hop <= 0) throw ValidationError("stft: hop must be positive");
  if (fft_size < window_length || fft_size % 2 != 0) {
    throw ValidationError("stft: fft size must be even and >= window length");
  }
}

Eigen::VectorXd make_window(WindowKind kind, int length) {
  if (kind != WindowKind::kSqrtHann) throw ValidationError("unknown window kind");
  if (length < 2 || length % 2 != 0) {
    throw ValidationError("window length must be even and >= 2");
  }
  Eigen::VectorXd w(length);
  for (int n = 0; n < length; ++n) {
    const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / length));
    w(n) = std::sqrt(hann);
  }
  return w;
}

void ComplexSpectrogram::validate() const {
  config.validate();
  if (channels.empty()) throw ValidationError("spectrogram: no channels");
  const Eigen::Index t = channels.front().rows();
  const Eigen::Index f = channels.front().cols();
  if (f != config.freq_bins()) {
    throw ValidationError("spectrogram: bin count does not match config");
  }
  for (const auto& ch : channels) {
    if (ch.rows() != t || ch.cols() != f) {
      throw ValidationError("spectrogram: ragged channel shapes");
    }
    if (!ch.allFinite()) throw ValidationError("spectrogram: non-finite values");
  }
}

ComplexSpectrogram stft(const MultiChannelWaveform& wave, const StftConfig& config) {
  config.validate();
  wave.validate();
  const int N = config.window_length;
  const int hop = config.hop;
  const Eigen::Index L = wave.length();
  if (L < N) throw ValidationError("stft: signal shorter than one window");

  const Eigen::Index T = (L - N) / hop + 1;
  const int F = config.freq_bins();
  const Eigen::VectorXd window = make_window(config.window_kind, N);

  ComplexSpectrogram spec;
  spec.config = config;
  spec.sample_rate = wave.sample_rate;
  spec.channels.reserve(static_cast<size_t>(wave.channels()));

  std::vector<double> frame(static_cast<size_t>(config.fft_size), 0.0);
  for (Eigen::Index u = 0; u < wave.channels(); ++u) {
    Eigen::MatrixXcd bins(T, F);
    for (Eigen::Index t = 0; t < T; ++t) {
      const Eigen::Index start = t * hop;
      for (int n = 0; n < N; ++n) frame[static_cast<size_t>(n)] = wave.samples(u, start + n) * window(n);
      const auto half = fft::rfft(frame, static_cast<size_t>(config.fft_size));
      for (int f = 0; f < F; ++f) bins(t, f) = half[static_cast<size_t>(f)];
    }
    spec.channels.push_back(std::move(bins));
  }
  return spec;
}

MultiChannelWaveform istft(const ComplexSpectrogram& spec, const StftConfig& config) {
  config.validate();
  spec.validate();
  if (spec.config != config) {
    throw ValidationError("istft: config does not match the spectrogram");
  }
  const int N = config.window_length;
  const int hop = config.hop;
  const Eigen::Index T = spec.frames();
  const Eigen::Index out_len = (T - 1) * hop + N;
  const Eigen::VectorXd window = make_window(config.window_kind, N);

  // Squared-window overlap (the WOLA denominator); exactly 1 in the
  // interior for sqrt-Hann at 50% overlap.
  Eigen::VectorXd denom = Eigen::VectorXd::Zero(out_len);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int n = 0; n < N; ++n) denom(t * hop + n) += window(n) * window(n);
  }

  MultiChannelWaveform out;
  out.sample_rate = spec.sample_rate;
  out.samples = Eigen::MatrixXd::Zero(spec.channel_count(), out_len);

  std::vector<std::complex<double>> half(static_cast<size_t>(config.freq_bins()));
  for (Eigen::Index u = 0; u < spec.channel_count(); ++u) {
    const Eigen::MatrixXcd& bins = spec.channels[static_cast<size_t>(u)];
    for (Eigen::Index t = 0; t < T; ++t) {
      for (int f = 0; f < config.freq_bins(); ++f) half[static_cast<size_t>(f)] = bins(t, f);
      const auto frame = fft::irfft(half, static_cast<size_t>(config.fft_size));
      const Eigen::Index start = t * hop;
      for (int n = 0; n < N; ++n) {
        out.samples(u, start + n) += frame[static_cast<size_t>(n)] * window(n);
      }
    }
    for (Eigen::Index n = 0; n < out_len; ++n) {
      out.samples(u, n) = denom(n) > 1e-12 ? out.samples(u, n) / denom(n) : 0.0;
    }
  }
  return out;
}

namespace {

nlohmann::json config_to_json(const StftConfig& config, int sample_rate) {
  return nlohmann::json{{"window_length", config.window_length},
                        {"hop", config.hop},
                        {"fft_size", config.fft_size},
                        {"window_kind", "sqrt-hann"},
                        {"sample_rate", sample_rate}};
}

}  // namespace

void save_spectrogram(const std::filesystem::path& tensor_path,
                      const std::filesystem::path& sidecar_path,
                      const ComplexSpectrogram& spec) {
  spec.validate();
  const auto U = static_cast<uint64_t>(spec.channel_count());
  const auto T = static_cast<uint64_t>(spec.frames());
  const auto F = static_cast<uint64_t>(spec.bins());
  std::vector<std::complex<float>> values;
  values.reserve(U * T * F);
  for (const auto& ch : spec.channels) {
    for (Eigen::Index t = 0; t < ch.rows(); ++t) {
      for (Eigen::Index f = 0; f < ch.cols(); ++f) {
        values.emplace_back(static_cast<float>(ch(t, f).real()),
                            static_cast<float>(ch(t, f).imag()));
      }
    }
  }
  write_tensor(tensor_path, TensorBlob::from_c64(values, {U, T, F}));

  std::ofstream sidecar(sidecar_path, std::ios::trunc);
  if (!sidecar) throw IoError("cannot write sidecar: " + sidecar_path.string());
  sidecar << config_to_json(spec.config, spec.sample_rate).dump(2) << "\n";
}

ComplexSpectrogram load_spectrogram(const std::filesystem::path& tensor_path,
                                    const std::filesystem::path& sidecar_path) {
  std::ifstream sidecar(sidecar_path);
  if (!sidecar) throw IoError("cannot read sidecar: " + sidecar_path.string());
  nlohmann::json j;
  try {
    sidecar >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("spectrogram sidecar: ") + e.what());
  }

  ComplexSpectrogram spec;
  spec.config.window_length = j.at("window_length").get<int>();
  spec.config.hop = j.at("hop").get<int>();
  spec.config.fft_size = j.at("fft_size").get<int>();
  spec.sample_rate = j.at("sample_rate").get<int>();

  const TensorBlob blob = read_tensor(tensor_path);
  if (blob.shape.size() != 3) throw FormatError("spectrogram tensor must be rank 3");
  const auto values = blob.as_c64();
  const auto U = static_cast<Eigen::Index>(blob.shape[0]);
  const auto T = static_cast<Eigen::Index>(blob.shape[1]);
  const auto F = static_cast<Eigen::Index>(blob.shape[2]);
  size_t k = 0;
  for (Eigen::Index u = 0; u < U; ++u) {
    Eigen::MatrixXcd ch(T, F);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index f = 0; f < F; ++f) {
        ch(t, f) = std::complex<double>(values[k].real(), values[k].imag());
        ++k;
      }
    }
    spec.channels.push_back(std::move(ch));
  }
  spec.validate();
  return spec;
}

}  // namespace mmtss
