// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_WAV_IO_HPP_
#define MMTSS_WAV_IO_HPP_

#include <filesystem>

#include "mmtss/waveform.hpp"

namespace mmtss {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavWriteOptions {
  // When a sample exceeds [-1, 1]: clip it if true, otherwise throw
  // ValidationError.
  bool clip = false;
  // Scale the whole signal so the peak lands at |peak_target| before
  // writing (applied only when the current peak exceeds it).
  bool normalize = false;
  double peak_target = 0.99;
};

// RIFF/WAVE reader for PCM16 and IEEE float32 payloads. PCM16 samples are
// mapped to [-1, 1) by dividing by 32768.
MultiChannelWaveform read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path,
               const MultiChannelWaveform& wave,
               WavEncoding encoding = WavEncoding::kFloat32,
               const WavWriteOptions& options = {});

}  // namespace mmtss

#endif  // MMTSS_WAV_IO_HPP_
