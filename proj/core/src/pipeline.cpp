// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mmtss/errors.hpp"
#include "mmtss/mask.hpp"
#include "mmtss/tensor_io.hpp"
#include "mmtss/wav_io.hpp"

namespace mmtss {

namespace {

using nlohmann::json;

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

json record_to_json(const ScoreRecord& r) {
  json j;
  j["id"] = r.id;
  j["si_sdr_db"] = r.si_sdr_db;
  j["sdr_db"] = r.sdr_db;
  j["speaker_count"] = r.speaker_count;
  j["angle_difference_deg"] =
      r.angle_difference_deg ? json(*r.angle_difference_deg) : json(nullptr);
  j["rtf"] = r.rtf ? json(*r.rtf) : json(nullptr);
  return j;
}

ScoreRecord record_from_json(const json& j) {
  ScoreRecord r;
  r.id = j.at("id").get<std::string>();
  r.si_sdr_db = j.at("si_sdr_db").get<double>();
  r.sdr_db = j.at("sdr_db").get<double>();
  r.speaker_count = j.at("speaker_count").get<int>();
  if (!j.at("angle_difference_deg").is_null()) {
    r.angle_difference_deg = j.at("angle_difference_deg").get<double>();
  }
  if (j.contains("rtf") && !j.at("rtf").is_null()) r.rtf = j.at("rtf").get<double>();
  return r;
}

}  // namespace

std::string example_id(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ex_%06llu", static_cast<unsigned long long>(index));
  return buf;
}

void write_example(const std::filesystem::path& dir, const MixtureExample& ex) {
  std::filesystem::create_directories(dir);
  write_wav(dir / "mixture.wav", ex.mixture, WavEncoding::kFloat32);
  for (size_t k = 0; k < ex.reverberant_sources.size(); ++k) {
    write_wav(dir / ("source_" + std::to_string(k) + ".wav"), ex.reverberant_sources[k],
              WavEncoding::kFloat32);
  }

  json j;
  j["id"] = example_id(ex.index);
  j["index"] = ex.index;
  j["base_seed"] = ex.base_seed;
  j["speaker_count"] = ex.speaker_count();
  j["target_index"] = ex.target_index;
  j["directions_deg"] = ex.directions_deg;
  const auto ad = ex.angle_difference_deg();
  j["angle_difference_deg"] = ad ? json(*ad) : json(nullptr);
  j["sir_db"] = ex.sir_db;
  j["snr_db"] = ex.snr_db ? json(*ex.snr_db) : json(nullptr);
  j["room"] = {{"size", vec3_to_json(ex.room.size)},
               {"t60", ex.room.t60},
               {"sound_speed", ex.room.sound_speed}};
  json mics = json::array();
  for (const auto& p : ex.placement.mic_positions) mics.push_back(vec3_to_json(p));
  json srcs = json::array();
  for (const auto& p : ex.placement.source_positions) srcs.push_back(vec3_to_json(p));
  j["placement"] = {{"mic_positions", mics}, {"source_positions", srcs}};
  j["gain"] = ex.gain;
  j["source_files"] = ex.source_files;
  j["noise_file"] = ex.noise_file ? json(*ex.noise_file) : json(nullptr);
  j["noise_offset"] = ex.noise_offset;
  j["sample_rate"] = ex.mixture.sample_rate;
  j["length"] = ex.mixture.length();
  write_text(dir / "metadata.json", j.dump(2) + "\n");
}

bool example_complete(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "metadata.json");
}

ExampleMetadata read_example_metadata(const std::filesystem::path& dir) {
  json j;
  try {
    j = json::parse(read_text(dir / "metadata.json"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("metadata: ") + e.what());
  }

  ExampleMetadata m;
  try {
    m.id = j.at("id").get<std::string>();
    m.index = j.at("index").get<uint64_t>();
    m.base_seed = j.at("base_seed").get<uint64_t>();
    m.speaker_count = j.at("speaker_count").get<int>();
    m.target_index = j.at("target_index").get<int>();
    m.directions_deg = j.at("directions_deg").get<std::vector<double>>();
    if (!j.at("angle_difference_deg").is_null()) {
      m.angle_difference_deg = j.at("angle_difference_deg").get<double>();
    }
    m.sir_db = j.at("sir_db").get<std::vector<double>>();
    if (!j.at("snr_db").is_null()) m.snr_db = j.at("snr_db").get<double>();
    m.room.size = vec3_from_json(j.at("room").at("size"));
    m.room.t60 = j.at("room").at("t60").get<double>();
    m.room.sound_speed = j.at("room").at("sound_speed").get<double>();
    for (const auto& p : j.at("placement").at("mic_positions")) {
      m.placement.mic_positions.push_back(vec3_from_json(p));
    }
    for (const auto& p : j.at("placement").at("source_positions")) {
      m.placement.source_positions.push_back(vec3_from_json(p));
    }
    m.gain = j.at("gain").get<double>();
    m.source_files = j.at("source_files").get<std::vector<std::string>>();
    if (!j.at("noise_file").is_null()) m.noise_file = j.at("noise_file").get<std::string>();
    m.noise_offset = j.at("noise_offset").get<uint64_t>();
    m.sample_rate = j.at("sample_rate").get<int>();
    m.length = j.at("length").get<int64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("metadata: ") + e.what());
  }
  return m;
}

void write_dataset_index(const std::filesystem::path& dataset_dir,
                         const SimulationManifest& manifest,
                         const std::vector<std::string>& ids) {
  json j;
  j["manifest"] = json::parse(manifest_to_json(manifest));
  j["examples"] = ids;
  write_text(dataset_dir / "index.json", j.dump(2) + "\n");
}

DatasetIndex read_dataset_index(const std::filesystem::path& dataset_dir) {
  json j;
  try {
    j = json::parse(read_text(dataset_dir / "index.json"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("dataset index: ") + e.what());
  }
  DatasetIndex index;
  index.manifest = manifest_from_json(j.at("manifest").dump());
  index.ids = j.at("examples").get<std::vector<std::string>>();
  return index;
}

ExampleFeatures featurize_mixture(const MultiChannelWaveform& mixture,
                                  double target_theta_deg,
                                  std::optional<double> angle_difference_deg,
                                  const ArrayGeometry& geom, const FeaturizeOptions& options) {
  const ComplexSpectrogram spec = stft(mixture, options.stft);
  ExampleFeatures out;
  out.lps = compute_lps(spec);
  out.ipd = compute_ipd(spec, geom);
  const Eigen::MatrixXd tpd = compute_tpd(geom, target_theta_deg, options.stft.freq_bins());
  out.df = compute_df(out.ipd, tpd);
  if (options.premask) out.df = premask_df(out.df);
  out.stacked = stack_features(out.lps, out.ipd, out.df);
  if (options.gate) {
    const double weight = rule_attention_weight(angle_difference_deg, options.gate_params);
    out.stacked = apply_feature_gate_stacked(out.stacked, options.stft.freq_bins(), weight);
  }
  return out;
}

namespace {

TensorBlob feature_to_tensor(const FeatureMap& feature) {
  const auto planes = static_cast<uint64_t>(feature.plane_count());
  const auto T = static_cast<uint64_t>(feature.frames());
  const auto F = static_cast<uint64_t>(feature.bins());
  std::vector<float> values;
  values.reserve(planes * T * F);
  for (const auto& plane : feature.planes) {
    for (Eigen::Index t = 0; t < plane.rows(); ++t) {
      for (Eigen::Index f = 0; f < plane.cols(); ++f) {
        values.push_back(static_cast<float>(plane(t, f)));
      }
    }
  }
  if (planes == 1) return TensorBlob::from_f32(values, {T, F});
  return TensorBlob::from_f32(values, {planes, T, F});
}

}  // namespace

void write_example_features(const std::filesystem::path& out_dir, const std::string& id,
                            const ExampleFeatures& features, const FeaturizeOptions& options,
                            double target_theta_deg) {
  const auto dir = out_dir / id;
  std::filesystem::create_directories(dir);
  write_tensor(dir / "lps.mmts", feature_to_tensor(features.lps));
  write_tensor(dir / "ipd.mmts", feature_to_tensor(features.ipd));
  write_tensor(dir / "df.mmts", feature_to_tensor(features.df));
  std::vector<float> stacked(static_cast<size_t>(features.stacked.size()));
  size_t k = 0;
  for (Eigen::Index r = 0; r < features.stacked.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.stacked.cols(); ++c) {
      stacked[k++] = static_cast<float>(features.stacked(r, c));
    }
  }
  write_tensor(dir / "feats.mmts",
               TensorBlob::from_f32(stacked, {static_cast<uint64_t>(features.stacked.rows()),
                                              static_cast<uint64_t>(features.stacked.cols())}));

  json j;
  j["id"] = id;
  j["target_theta_deg"] = target_theta_deg;
  j["premask"] = options.premask;
  j["gate"] = options.gate;
  j["gate_w"] = options.gate_params.w;
  j["gate_b"] = options.gate_params.b;
  j["stft"] = {{"window_length", options.stft.window_length},
               {"hop", options.stft.hop},
               {"fft_size", options.stft.fft_size}};
  j["rows"] = features.stacked.rows();
  j["frames"] = features.stacked.cols();
  write_text(dir / "feats.json", j.dump(2) + "\n");
}

ScoreRecord score_estimate(const std::string& id, const Eigen::VectorXd& estimate,
                           const Eigen::VectorXd& reference, int margin,
                           const ExampleMetadata& meta) {
  const Eigen::Index common = std::min(estimate.size(), reference.size());
  const Eigen::Index lo = margin;
  const Eigen::Index len = common - 2 * static_cast<Eigen::Index>(margin);
  if (len <= 0) throw ValidationError("score: signals shorter than twice the margin");

  ScoreRecord record;
  record.id = id;
  record.si_sdr_db = si_sdr(estimate.segment(lo, len), reference.segment(lo, len));
  record.sdr_db = sdr_simple(estimate.segment(lo, len), reference.segment(lo, len));
  record.speaker_count = meta.speaker_count;
  record.angle_difference_deg = meta.angle_difference_deg;
  return record;
}

OracleSeparationResult oracle_separate_example(const std::filesystem::path& example_dir,
                                               const StftConfig& config) {
  const ExampleMetadata meta = read_example_metadata(example_dir);
  const MultiChannelWaveform mixture = read_wav(example_dir / "mixture.wav");

  std::vector<MultiChannelWaveform> references;
  for (int k = 0; k < meta.speaker_count; ++k) {
    const auto path = example_dir / ("source_" + std::to_string(k) + ".wav");
    if (!std::filesystem::exists(path)) {
      throw IoError("missing reference " + path.string());
    }
    references.push_back(read_wav(path));
  }

  OracleSeparationResult result;
  const double audio_seconds = mixture.seconds();
  const RtfResult timing = measure_rtf(
      [&]() {
        const ComplexSpectrogram mix_spec = stft(mixture, config);

        MultiChannelWaveform target_ref;
        target_ref.sample_rate = mixture.sample_rate;
        target_ref.samples =
            references[static_cast<size_t>(meta.target_index)].samples.row(0);
        const ComplexSpectrogram target_spec = stft(target_ref, config);

        std::vector<Eigen::MatrixXcd> others;
        for (int k = 0; k < meta.speaker_count; ++k) {
          if (k == meta.target_index) continue;
          MultiChannelWaveform other;
          other.sample_rate = mixture.sample_rate;
          other.samples = references[static_cast<size_t>(k)].samples.row(0);
          others.push_back(stft(other, config).channels.front());
        }

        const Eigen::MatrixXd mask = oracle_irm(target_spec.channels.front(), others);
        ComplexSpectrogram est_spec;
        est_spec.config = config;
        est_spec.sample_rate = mixture.sample_rate;
        est_spec.channels.push_back(apply_mask(mix_spec.channels.front(), mask));
        result.estimate = istft(est_spec, config);
      },
      audio_seconds);

  const Eigen::VectorXd est = result.estimate.samples.row(0).transpose();
  const Eigen::VectorXd ref = references[static_cast<size_t>(meta.target_index)]
                                  .samples.row(0)
                                  .transpose();
  const int margin = config.window_length - config.hop;
  result.record = score_estimate(meta.id, est, ref, margin, meta);
  result.record.rtf = timing.rtf;
  return result;
}

std::string score_records_to_json(const std::vector<ScoreRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2);
}

std::vector<ScoreRecord> score_records_from_json(const std::string& text) {
  std::vector<ScoreRecord> out;
  try {
    const json arr = json::parse(text);
    for (const auto& j : arr) out.push_back(record_from_json(j));
  } catch (const json::exception& e) {
    throw FormatError(std::string("scores: ") + e.what());
  }
  return out;
}

}  // namespace mmtss
