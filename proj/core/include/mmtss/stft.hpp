// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_STFT_HPP_
#define MMTSS_STFT_HPP_

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "mmtss/waveform.hpp"

namespace mmtss {

enum class WindowKind { kSqrtHann };

struct StftConfig {
  int window_length = 512;  // N
  int hop = 256;
  int fft_size = 512;
  WindowKind window_kind = WindowKind::kSqrtHann;

  int freq_bins() const { return fft_size / 2 + 1; }
  // N even and >= 2, hop > 0, fft_size even and >= N.
  void validate() const;
  bool operator==(const StftConfig&) const = default;
};

// Periodic sqrt-Hann: w[n] = sqrt(0.5 * (1 - cos(2*pi*n/N))). The squared
// window tiles exactly to 1 at 50% overlap.
Eigen::VectorXd make_window(WindowKind kind, int length);

// [channels][frames x bins] complex spectra.
struct ComplexSpectrogram {
  std::vector<Eigen::MatrixXcd> channels;  // each T x F
  StftConfig config;
  int sample_rate = 0;

  Eigen::Index channel_count() const { return static_cast<Eigen::Index>(channels.size()); }
  Eigen::Index frames() const { return channels.empty() ? 0 : channels.front().rows(); }
  Eigen::Index bins() const { return channels.empty() ? 0 : channels.front().cols(); }
  void validate() const;
};

// Frame t covers samples [t*hop, t*hop + N); no implicit padding, so
// T = floor((L - N)/hop) + 1. Throws ValidationError when L < N.
ComplexSpectrogram stft(const MultiChannelWaveform& wave, const StftConfig& config);

// Weighted overlap-add with the same sqrt-Hann synthesis window. Output
// length is (T-1)*hop + N; samples in [N-hop, L-N+hop) reconstruct the
// input to <= 1e-6 relative L2 error.
MultiChannelWaveform istft(const ComplexSpectrogram& spec, const StftConfig& config);

// MMTS c64 tensor [U, T, F] plus a JSON sidecar holding the config.
void save_spectrogram(const std::filesystem::path& tensor_path,
                      const std::filesystem::path& sidecar_path,
                      const ComplexSpectrogram& spec);
ComplexSpectrogram load_spectrogram(const std::filesystem::path& tensor_path,
                                    const std::filesystem::path& sidecar_path);

}  // namespace mmtss

#endif  // MMTSS_STFT_HPP_
