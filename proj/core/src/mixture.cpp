// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mmtss/errors.hpp"
#include "mmtss/logging.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/wav_io.hpp"

namespace mmtss {

namespace {

constexpr int kMaxRoomDraws = 1000;
constexpr int kMaxPositionDraws = 1000;
constexpr double kPeakLimit = 0.99;

double ref_power(const MultiChannelWaveform& w) {
  return w.samples.row(0).squaredNorm() / static_cast<double>(w.length());
}

Eigen::VectorXd fit_length(const Eigen::VectorXd& noise, Eigen::Index len, bool allow_loop) {
  if (noise.size() >= len) return noise.head(len);
  if (!allow_loop) {
    throw ValidationError("noise shorter than the mixture and looping is disabled");
  }
  Eigen::VectorXd out(len);
  for (Eigen::Index i = 0; i < len; ++i) out(i) = noise(i % noise.size());
  return out;
}

MultiChannelWaveform read_mono_checked(const std::string& path, int sample_rate) {
  MultiChannelWaveform wave = read_wav(path);
  if (wave.sample_rate != sample_rate) {
    throw ValidationError("sample rate of " + path + " does not match the manifest");
  }
  if (wave.channels() > 1) {
    MultiChannelWaveform first;
    first.sample_rate = wave.sample_rate;
    first.samples = wave.samples.row(0);
    return first;
  }
  return wave;
}

MultiChannelWaveform pad_to(const MultiChannelWaveform& wave, Eigen::Index len) {
  if (wave.length() == len) return wave;
  MultiChannelWaveform out;
  out.sample_rate = wave.sample_rate;
  out.samples = Eigen::MatrixXd::Zero(wave.channels(), len);
  out.samples.leftCols(wave.length()) = wave.samples;
  return out;
}

}  // namespace

std::optional<double> MixtureExample::angle_difference_deg() const {
  std::vector<double> interferers;
  for (size_t i = 0; i < directions_deg.size(); ++i) {
    if (static_cast<int>(i) != target_index) interferers.push_back(directions_deg[i]);
  }
  return angle_difference(directions_deg[static_cast<size_t>(target_index)], interferers);
}

MultiChannelWaveform scale_to_sir(const MultiChannelWaveform& target,
                                  const MultiChannelWaveform& interferer, double sir_db) {
  target.validate();
  interferer.validate();
  const double p_target = ref_power(target);
  const double p_interferer = ref_power(interferer);
  if (p_target <= 0.0 || p_interferer <= 0.0) {
    throw ValidationError("scale_to_sir: zero-power input");
  }
  const double gain = std::sqrt(p_target / (p_interferer * std::pow(10.0, sir_db / 10.0)));
  MultiChannelWaveform out = interferer;
  out.samples *= gain;
  return out;
}

MultiChannelWaveform add_noise_at_snr(const MultiChannelWaveform& mix,
                                      const MultiChannelWaveform& noise, double snr_db,
                                      bool allow_loop) {
  mix.validate();
  if (std::isinf(snr_db) && snr_db > 0.0) return mix;
  noise.validate();
  if (noise.channels() != 1) {
    throw ValidationError("add_noise_at_snr: noise must be single channel");
  }

  const Eigen::VectorXd fitted =
      fit_length(noise.samples.row(0).transpose(), mix.length(), allow_loop);
  const double p_speech = ref_power(mix);
  const double p_noise = fitted.squaredNorm() / static_cast<double>(fitted.size());
  if (p_noise <= 0.0) throw ValidationError("add_noise_at_snr: zero-power noise");
  if (p_speech <= 0.0) throw ValidationError("add_noise_at_snr: zero-power mix");

  const double gain = std::sqrt(p_speech / (p_noise * std::pow(10.0, snr_db / 10.0)));
  MultiChannelWaveform out = mix;
  out.samples.rowwise() += (gain * fitted).transpose();
  return out;
}

MixtureExample simulate_mixture(const SimulationManifest& manifest, uint64_t index) {
  manifest.validate();
  Prng rng(manifest.base_seed, index);

  MixtureExample ex;
  ex.base_seed = manifest.base_seed;
  ex.index = index;

  // 1) speaker count
  const int speakers = static_cast<int>(rng.pick_weighted(manifest.speaker_count_weights)) + 1;
  if (manifest.sources.size() < static_cast<size_t>(speakers)) {
    throw ValidationError("manifest lists fewer sources than the sampled speaker count");
  }

  // 2) distinct source utterances (partial Fisher-Yates)
  std::vector<size_t> order(manifest.sources.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int i = 0; i < speakers; ++i) {
    const size_t j = static_cast<size_t>(i) +
                     rng.uniform_int(order.size() - static_cast<size_t>(i));
    std::swap(order[static_cast<size_t>(i)], order[j]);
  }
  for (int i = 0; i < speakers; ++i) {
    ex.source_files.push_back(manifest.sources[order[static_cast<size_t>(i)]]);
  }

  // 3) SIR per interferer
  for (int i = 1; i < speakers; ++i) {
    ex.sir_db.push_back(rng.uniform(manifest.sir_db.min, manifest.sir_db.max));
  }

  // 4) room and T60, resampled jointly while Sabine is infeasible
  bool feasible = false;
  for (int attempt = 0; attempt < kMaxRoomDraws && !feasible; ++attempt) {
    ex.room.size = Eigen::Vector3d(rng.uniform(manifest.room_x.min, manifest.room_x.max),
                                   rng.uniform(manifest.room_y.min, manifest.room_y.max),
                                   rng.uniform(manifest.room_z.min, manifest.room_z.max));
    ex.room.t60 = rng.uniform(manifest.t60.min, manifest.t60.max);
    try {
      sabine_absorption(ex.room);
      feasible = true;
    } catch (const InfeasibleT60Error&) {
      log::debug("resampling infeasible (room, t60) draw");
    }
  }
  if (!feasible) {
    throw InfeasibleT60Error("no feasible (room, t60) draw within the manifest ranges");
  }

  // 5) array placement: random center and horizontal orientation
  const ArrayGeometry local = default_array_geometry(manifest.sample_rate);
  const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Eigen::Vector3d axis(std::cos(azimuth), std::sin(azimuth), 0.0);
  double half_span = 0.0;
  for (const auto& p : local.positions) {
    half_span = std::max(half_span, (p - local.center()).norm());
  }
  Eigen::Vector3d lo, hi;
  for (int d = 0; d < 3; ++d) {
    const double extent = (d < 2) ? half_span * std::abs(axis(d)) : 0.0;
    lo(d) = manifest.wall_margin + extent;
    hi(d) = ex.room.size(d) - manifest.wall_margin - extent;
    if (lo(d) >= hi(d)) throw PlacementError("room too small for the array margin");
  }
  const Eigen::Vector3d center(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                               rng.uniform(lo.z(), hi.z()));
  const ArrayGeometry placed = place_geometry(local, center, axis);
  ex.placement.mic_positions = placed.positions;

  // 6) source positions within the distance ring
  for (int srcn = 0; srcn < speakers; ++srcn) {
    bool placed_ok = false;
    for (int attempt = 0; attempt < kMaxPositionDraws && !placed_ok; ++attempt) {
      Eigen::Vector3d p;
      for (int d = 0; d < 3; ++d) {
        p(d) = rng.uniform(manifest.wall_margin, ex.room.size(d) - manifest.wall_margin);
      }
      const double dist = (p - center).norm();
      if (manifest.source_distance.contains(dist)) {
        ex.placement.source_positions.push_back(p);
        placed_ok = true;
      }
    }
    if (!placed_ok) {
      throw PlacementError("could not place a source within the distance constraints");
    }
    ex.directions_deg.push_back(source_angle(placed, ex.placement.source_positions.back()));
  }

  // 7) noise draw (file and SNR; the offset is drawn after the mixture
  // length is known)
  std::optional<size_t> noise_idx;
  if (manifest.snr_db) {
    noise_idx = static_cast<size_t>(rng.uniform_int(manifest.noises.size()));
    ex.noise_file = manifest.noises[*noise_idx];
    ex.snr_db = rng.uniform(manifest.snr_db->min, manifest.snr_db->max);
  }

  // 8) reverberate each source
  const Eigen::Vector3d beta = axial_reflectivities(ex.room);
  const size_t rir_len = default_rir_length(ex.room, manifest.sample_rate);
  std::vector<MultiChannelWaveform> reverberant;
  for (int srcn = 0; srcn < speakers; ++srcn) {
    const MultiChannelWaveform dry =
        read_mono_checked(ex.source_files[static_cast<size_t>(srcn)], manifest.sample_rate);
    const Eigen::Vector3d& pos = ex.placement.source_positions[static_cast<size_t>(srcn)];
    const int max_order = choose_max_order(ex.room, beta.maxCoeff(), (pos - center).norm());
    std::vector<std::vector<double>> rirs;
    rirs.reserve(placed.positions.size());
    for (const auto& mic : placed.positions) {
      rirs.push_back(image_source_rir(ex.room.size, beta, pos, mic, manifest.sample_rate,
                                      ex.room.sound_speed, ImageOrder::uniform(max_order),
                                      rir_len));
    }
    reverberant.push_back(apply_rir(dry, rirs));
  }

  // 9) SIR scaling against the unscaled reverberant target
  for (int i = 1; i < speakers; ++i) {
    reverberant[static_cast<size_t>(i)] = scale_to_sir(
        reverberant[0], reverberant[static_cast<size_t>(i)], ex.sir_db[static_cast<size_t>(i - 1)]);
  }

  // 10) pad to the longest source and sum
  Eigen::Index final_len = 0;
  for (const auto& r : reverberant) final_len = std::max(final_len, r.length());
  for (auto& r : reverberant) r = pad_to(r, final_len);

  MultiChannelWaveform speech_sum;
  speech_sum.sample_rate = manifest.sample_rate;
  speech_sum.samples = Eigen::MatrixXd::Zero(reverberant.front().channels(), final_len);
  for (const auto& r : reverberant) speech_sum.samples += r.samples;

  // 11) noise fitted, offset and scaled
  Eigen::VectorXd noise_scaled;
  if (noise_idx) {
    const MultiChannelWaveform noise_wave =
        read_mono_checked(*ex.noise_file, manifest.sample_rate);
    Eigen::VectorXd noise_row = noise_wave.samples.row(0).transpose();
    if (noise_row.size() > final_len) {
      ex.noise_offset = rng.uniform_int(
          static_cast<uint64_t>(noise_row.size() - final_len) + 1);
      noise_row = noise_row.segment(static_cast<Eigen::Index>(ex.noise_offset), final_len).eval();
    } else {
      noise_row = fit_length(noise_row, final_len, /*allow_loop=*/true);
    }
    const double p_speech = ref_power(speech_sum);
    const double p_noise = noise_row.squaredNorm() / static_cast<double>(final_len);
    if (p_noise <= 0.0) throw ValidationError("simulate: zero-power noise recording");
    if (p_speech <= 0.0) throw ValidationError("simulate: zero-power speech sum");
    const double gain = std::sqrt(p_speech / (p_noise * std::pow(10.0, *ex.snr_db / 10.0)));
    noise_scaled = gain * noise_row;
  } else {
    noise_scaled = Eigen::VectorXd();
  }

  // 12) common peak gain so every stored file stays within [-1, 1]
  double peak = speech_sum.samples.cwiseAbs().maxCoeff();
  if (noise_scaled.size() > 0) {
    Eigen::MatrixXd candidate = speech_sum.samples;
    candidate.rowwise() += noise_scaled.transpose();
    peak = std::max(peak, candidate.cwiseAbs().maxCoeff());
  }
  for (const auto& r : reverberant) peak = std::max(peak, r.samples.cwiseAbs().maxCoeff());
  ex.gain = peak > kPeakLimit ? kPeakLimit / peak : 1.0;

  for (auto& r : reverberant) r.samples *= ex.gain;
  if (noise_scaled.size() > 0) noise_scaled *= ex.gain;

  // 13) final mixture re-summed from the scaled components so the
  // bookkeeping identity holds bit-exactly
  ex.mixture.sample_rate = manifest.sample_rate;
  ex.mixture.samples = Eigen::MatrixXd::Zero(reverberant.front().channels(), final_len);
  for (const auto& r : reverberant) ex.mixture.samples += r.samples;
  if (noise_scaled.size() > 0) ex.mixture.samples.rowwise() += noise_scaled.transpose();

  ex.reverberant_sources = std::move(reverberant);
  ex.noise = std::move(noise_scaled);
  ex.target_index = 0;
  ex.mixture.validate();
  return ex;
}

}  // namespace mmtss
