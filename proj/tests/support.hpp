// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_TESTS_SUPPORT_HPP_
#define MMTSS_TESTS_SUPPORT_HPP_

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mmtss/geometry.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/wav_io.hpp"
#include "mmtss/waveform.hpp"

namespace mmtss::testing {

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("mmtss_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline Eigen::VectorXd random_vector(uint64_t seed, Eigen::Index n, double scale = 0.5) {
  Prng rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * (2.0 * rng.uniform01() - 1.0);
  return v;
}

inline Eigen::MatrixXd random_matrix(uint64_t seed, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 0.5) {
  Prng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scale * (2.0 * rng.uniform01() - 1.0);
  }
  return m;
}

// Band-limited noise with speech-like temporal envelopes: random per-band
// sinusoid comb amplitude-modulated by smooth on/off activity, plus a
// little wideband floor. Good enough for mask and SIR statistics.
inline Eigen::VectorXd make_speech_like(uint64_t seed, double seconds, int sample_rate) {
  Prng rng(seed, 0x737065);
  const auto n = static_cast<Eigen::Index>(seconds * sample_rate);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);

  // 24 random partials between 120 Hz and 3.8 kHz
  for (int p = 0; p < 24; ++p) {
    const double f = rng.uniform(120.0, 3800.0);
    const double amp = rng.uniform(0.02, 0.09);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double mod_rate = rng.uniform(1.5, 6.0);  // syllabic modulation
    const double mod_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      const double envelope =
          0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * mod_rate * t + mod_phase));
      out(i) += amp * envelope * envelope *
                std::sin(2.0 * std::numbers::pi * f * t + phase);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) out(i) += 0.01 * (2.0 * rng.uniform01() - 1.0);
  return out;
}

inline Eigen::VectorXd make_noise(uint64_t seed, double seconds, int sample_rate) {
  return random_vector(seed, static_cast<Eigen::Index>(seconds * sample_rate), 0.3);
}

inline std::vector<std::string> write_speech_corpus(const std::filesystem::path& dir,
                                                    int count, double seconds,
                                                    int sample_rate, uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (int i = 0; i < count; ++i) {
    const auto path = dir / ("speech_" + std::to_string(i) + ".wav");
    write_wav(path, mono(make_speech_like(seed + static_cast<uint64_t>(i), seconds, sample_rate),
                         sample_rate),
              WavEncoding::kFloat32);
    paths.push_back(path.string());
  }
  return paths;
}

inline std::vector<std::string> write_noise_corpus(const std::filesystem::path& dir, int count,
                                                   double seconds, int sample_rate,
                                                   uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (int i = 0; i < count; ++i) {
    const auto path = dir / ("noise_" + std::to_string(i) + ".wav");
    write_wav(path,
              mono(make_noise(seed + 1000 + static_cast<uint64_t>(i), seconds, sample_rate),
                   sample_rate),
              WavEncoding::kFloat32);
    paths.push_back(path.string());
  }
  return paths;
}

// Anechoic far-field construction: a comb of bin-centered sinusoids is
// delayed per microphone by the exact plane-wave delay for direction
// theta. Because the partials sit on DFT bins 3 apart, the sqrt-Hann
// STFT has zero cross-bin leakage and the observed IPD equals the
// theoretical TPD at every active bin.
struct PlaneWaveSignal {
  MultiChannelWaveform wave;
  std::vector<int> active_bins;
};

inline PlaneWaveSignal make_plane_wave(const ArrayGeometry& geom, double theta_deg,
                                       double seconds, int fft_size, uint64_t seed) {
  Prng rng(seed, 0x706c616e);
  const int fs = geom.sample_rate;
  const auto n = static_cast<Eigen::Index>(seconds * fs);
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const Eigen::Vector3d direction =
      std::cos(theta) * geom.axis + std::sin(theta) * Eigen::Vector3d::UnitY();

  PlaneWaveSignal out;
  out.wave.sample_rate = fs;
  out.wave.samples = Eigen::MatrixXd::Zero(geom.mic_count(), n);

  const int lo_bin = fft_size / 32;        // skip DC region
  const int hi_bin = (7 * fft_size) / 16;  // stay below 0.44 fs
  for (int bin = lo_bin; bin <= hi_bin; bin += 3) {
    const double f_hz = static_cast<double>(bin) * fs / fft_size;
    const double amp = rng.uniform(0.02, 0.05);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.active_bins.push_back(bin);
    for (int u = 0; u < geom.mic_count(); ++u) {
      // mics nearer the source receive earlier
      const double advance =
          geom.positions[static_cast<size_t>(u)].dot(direction) / geom.sound_speed;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs + advance;
        out.wave.samples(u, i) += amp * std::cos(2.0 * std::numbers::pi * f_hz * t + phase);
      }
    }
  }
  return out;
}

// Direct-path arrival: first threshold crossing refined to the local
// mainlobe peak. A plain argmax can land on a late superposition of
// several images when the fractional delay splits the direct mainlobe
// across two taps.
inline size_t first_arrival_index(const std::vector<double>& rir) {
  const size_t n = rir.size();
  double peak = 0.0;
  for (double v : rir) peak = std::max(peak, std::abs(v));
  // Onset: 2% of the global maximum clears the fractional-delay
  // pre-ring even when the dense late field tops the direct path.
  const double onset_threshold = 0.02 * peak;
  size_t onset = 0;
  while (onset < n && std::abs(rir[onset]) < onset_threshold) ++onset;
  // The direct mainlobe lies within one sinc half-support of the onset;
  // sidelobes stay below half of the event maximum, the mainlobe does
  // not.
  double event_peak = 0.0;
  for (size_t j = onset; j < std::min(onset + 41, n); ++j) {
    event_peak = std::max(event_peak, std::abs(rir[j]));
  }
  const double bar = 0.5 * event_peak;
  for (size_t j = onset; j + 1 < n; ++j) {
    if (std::abs(rir[j]) >= bar && std::abs(rir[j]) >= std::abs(rir[j + 1])) return j;
  }
  return onset;
}

// Schroeder backward integration; T60 extrapolated from the decay slope
// between -5 dB and -25 dB.
inline double schroeder_t60(const std::vector<double>& rir, int sample_rate) {
  const size_t n = rir.size();
  std::vector<double> edc(n, 0.0);
  double acc = 0.0;
  for (size_t i = n; i-- > 0;) {
    acc += rir[i] * rir[i];
    edc[i] = acc;
  }
  const double total = edc[0];
  std::vector<double> db(n);
  for (size_t i = 0; i < n; ++i) {
    db[i] = 10.0 * std::log10(std::max(edc[i] / total, 1e-30));
  }

  size_t lo = 0, hi = 0;
  for (size_t i = 0; i < n; ++i) {
    if (db[i] <= -5.0) {
      lo = i;
      break;
    }
  }
  for (size_t i = lo; i < n; ++i) {
    if (db[i] <= -25.0) {
      hi = i;
      break;
    }
  }
  if (hi <= lo) return 0.0;

  // least-squares slope of db over [lo, hi]
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(hi - lo + 1);
  for (size_t i = lo; i <= hi; ++i) {
    const double x = static_cast<double>(i) / sample_rate;
    sx += x;
    sy += db[i];
    sxx += x * x;
    sxy += x * db[i];
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  if (slope >= 0.0) return 0.0;
  return -60.0 / slope;
}

}  // namespace mmtss::testing

#endif  // MMTSS_TESTS_SUPPORT_HPP_
