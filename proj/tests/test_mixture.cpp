// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmtss/errors.hpp"
#include "mmtss/mixture.hpp"
#include "mmtss/pipeline.hpp"
#include "support.hpp"

using namespace mmtss;

namespace {

MultiChannelWaveform two_channel(uint64_t seed, Eigen::Index len, double scale) {
  MultiChannelWaveform w;
  w.sample_rate = 16000;
  w.samples.resize(2, len);
  w.samples.row(0) = scale * testing::random_vector(seed, len).transpose();
  w.samples.row(1) = scale * testing::random_vector(seed + 1, len).transpose();
  return w;
}

double ref_power_db(const MultiChannelWaveform& a, const MultiChannelWaveform& b) {
  const double pa = a.samples.row(0).squaredNorm() / static_cast<double>(a.length());
  const double pb = b.samples.row(0).squaredNorm() / static_cast<double>(b.length());
  return 10.0 * std::log10(pa / pb);
}

// Small fast manifest: short sources, mild reverb.
SimulationManifest test_manifest(const std::filesystem::path& dir, uint64_t seed, int count) {
  SimulationManifest m;
  m.base_seed = seed;
  m.count = count;
  m.sources = testing::write_speech_corpus(dir / "speech", 6, 1.2, 16000, seed);
  m.noises = testing::write_noise_corpus(dir / "noise", 2, 1.5, 16000, seed);
  m.t60 = {0.15, 0.3};
  return m;
}

}  // namespace

TEST_CASE("scale_to_sir") {
  const auto target = two_channel(1, 4000, 0.5);
  const auto interferer = two_channel(7, 4000, 0.1);

  SUBCASE("zero dB equalizes reference-channel powers") {
    const auto scaled = scale_to_sir(target, interferer, 0.0);
    CHECK(ref_power_db(target, scaled) == doctest::Approx(0.0).epsilon(1e-10));
  }

  SUBCASE("six dB maps to a power ratio near 3.981") {
    const auto scaled = scale_to_sir(target, interferer, 6.0);
    const double ratio = (target.samples.row(0).squaredNorm() / 4000.0) /
                         (scaled.samples.row(0).squaredNorm() / 4000.0);
    CHECK(ratio == doctest::Approx(std::pow(10.0, 0.6)).epsilon(1e-10));
  }

  SUBCASE("silent interferer rejected") {
    MultiChannelWaveform silent;
    silent.sample_rate = 16000;
    silent.samples = Eigen::MatrixXd::Zero(2, 4000);
    CHECK_THROWS_AS(scale_to_sir(target, silent, 0.0), ValidationError);
  }
}

TEST_CASE("add_noise_at_snr") {
  const auto mix = two_channel(2, 4000, 0.4);

  SUBCASE("infinite snr leaves the mix untouched") {
    MultiChannelWaveform noise;
    noise.sample_rate = 16000;
    noise.samples = testing::random_vector(3, 4000).transpose();
    const auto out = add_noise_at_snr(mix, noise, std::numeric_limits<double>::infinity());
    CHECK(out.samples == mix.samples);
  }

  SUBCASE("snr 20 gives a speech-to-noise power ratio of 100") {
    MultiChannelWaveform noise;
    noise.sample_rate = 16000;
    noise.samples = testing::random_vector(4, 6000).transpose();
    const auto out = add_noise_at_snr(mix, noise, 20.0);
    MultiChannelWaveform added;
    added.sample_rate = 16000;
    added.samples = out.samples - mix.samples;
    CHECK(ref_power_db(mix, added) == doctest::Approx(20.0).epsilon(1e-9));
    // identical noise on every channel
    CHECK((added.samples.row(0) - added.samples.row(1)).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("short noise without looping is rejected") {
    MultiChannelWaveform noise;
    noise.sample_rate = 16000;
    noise.samples = testing::random_vector(5, 1000).transpose();
    CHECK_THROWS_AS(add_noise_at_snr(mix, noise, 20.0, /*allow_loop=*/false),
                    ValidationError);
    CHECK_NOTHROW(add_noise_at_snr(mix, noise, 20.0, /*allow_loop=*/true));
  }

  SUBCASE("zero-power noise rejected") {
    MultiChannelWaveform silent;
    silent.sample_rate = 16000;
    silent.samples = Eigen::MatrixXd::Zero(1, 4000);
    CHECK_THROWS_AS(add_noise_at_snr(mix, silent, 20.0), ValidationError);
  }
}

TEST_CASE("simulate_mixture") {
  testing::TempDir tmp("simulate");

  SUBCASE("same seed and index reproduce the mixture bit for bit") {
    const auto manifest = test_manifest(tmp.path, 11, 1);
    const auto a = simulate_mixture(manifest, 0);
    const auto b = simulate_mixture(manifest, 0);
    CHECK(a.mixture.samples == b.mixture.samples);
    CHECK(a.directions_deg == b.directions_deg);
    CHECK(a.sir_db == b.sir_db);
    CHECK(a.room.size == b.room.size);
    const auto c = simulate_mixture(manifest, 1);
    CHECK(a.mixture.samples != c.mixture.samples);
  }

  SUBCASE("single speaker scene has no SIR entries") {
    auto manifest = test_manifest(tmp.path, 12, 1);
    manifest.speaker_count_weights = {1.0, 0.0, 0.0};
    const auto ex = simulate_mixture(manifest, 0);
    CHECK(ex.speaker_count() == 1);
    CHECK(ex.sir_db.empty());
    CHECK_FALSE(ex.angle_difference_deg().has_value());
    // mixture = reverberant target + noise, summed in component order
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ex.mixture.channels(), ex.mixture.length());
    sum += ex.reverberant_sources[0].samples;
    sum.rowwise() += ex.noise.transpose();
    CHECK(sum == ex.mixture.samples);
  }

  SUBCASE("energy bookkeeping is exact") {
    const auto manifest = test_manifest(tmp.path, 13, 1);
    const auto ex = simulate_mixture(manifest, 3);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ex.mixture.channels(), ex.mixture.length());
    for (const auto& src : ex.reverberant_sources) sum += src.samples;
    if (ex.noise.size() > 0) sum.rowwise() += ex.noise.transpose();
    // the re-summed components reproduce the stored mixture bit for bit
    CHECK(sum == ex.mixture.samples);
    CHECK((sum - ex.mixture.samples).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("metadata ratios match measurements from the stored waveforms") {
    const auto manifest = test_manifest(tmp.path, 14, 1);
    for (uint64_t index = 0; index < 6; ++index) {
      const auto ex = simulate_mixture(manifest, index);
      write_example(tmp.path / "out" / example_id(index), ex);
      const auto dir = tmp.path / "out" / example_id(index);
      const auto target = read_wav(dir / "source_0.wav");
      for (size_t i = 1; i < ex.reverberant_sources.size(); ++i) {
        const auto interferer = read_wav(dir / ("source_" + std::to_string(i) + ".wav"));
        CHECK(ref_power_db(target, interferer) ==
              doctest::Approx(ex.sir_db[i - 1]).epsilon(1e-4));
      }
      if (ex.snr_db) {
        // noise = mixture minus the stored sources
        const auto mix = read_wav(dir / "mixture.wav");
        Eigen::MatrixXd speech = Eigen::MatrixXd::Zero(mix.channels(), mix.length());
        for (int k = 0; k < ex.speaker_count(); ++k) {
          speech += read_wav(dir / ("source_" + std::to_string(k) + ".wav")).samples;
        }
        const Eigen::VectorXd noise = (mix.samples - speech).row(0).transpose();
        const double p_speech = speech.row(0).squaredNorm();
        const double p_noise = noise.squaredNorm();
        const double measured = 10.0 * std::log10(p_speech / p_noise);
        CHECK(measured == doctest::Approx(*ex.snr_db).epsilon(0.01));
      }
    }
  }

  SUBCASE("direction metadata agrees with the placement geometry") {
    const auto manifest = test_manifest(tmp.path, 15, 1);
    const auto ex = simulate_mixture(manifest, 2);
    ArrayGeometry geom = default_array_geometry(manifest.sample_rate);
    const Eigen::Vector3d axis =
        (ex.placement.mic_positions.front() - ex.placement.mic_positions.back()).normalized();
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& p : ex.placement.mic_positions) center += p;
    center /= 9.0;
    const auto placed = place_geometry(geom, center, axis);
    for (size_t s = 0; s < ex.placement.source_positions.size(); ++s) {
      CHECK(source_angle(placed, ex.placement.source_positions[s]) ==
            doctest::Approx(ex.directions_deg[s]).epsilon(1e-9));
    }
    // every direction lies in [0, 180] and every distance in [1, 5]
    for (double theta : ex.directions_deg) {
      CHECK(theta >= 0.0);
      CHECK(theta <= 180.0);
    }
    for (const auto& p : ex.placement.source_positions) {
      const double dist = (p - center).norm();
      CHECK(dist >= 1.0);
      CHECK(dist <= 5.0);
    }
  }

  SUBCASE("speaker count proportions track the manifest weights") {
    auto manifest = test_manifest(tmp.path, 16, 1);
    manifest.sources = testing::write_speech_corpus(tmp.path / "speech_short", 6, 0.5, 16000, 99);
    manifest.t60 = {0.12, 0.18};
    int counts[4] = {0, 0, 0, 0};
    for (uint64_t index = 0; index < 200; ++index) {
      counts[simulate_mixture(manifest, index).speaker_count()]++;
    }
    CHECK(std::abs(counts[1] / 200.0 - 0.49) <= 0.07);
    CHECK(std::abs(counts[2] / 200.0 - 0.29) <= 0.07);
    CHECK(std::abs(counts[3] / 200.0 - 0.22) <= 0.07);
  }

  SUBCASE("stored waveforms never exceed full scale") {
    const auto manifest = test_manifest(tmp.path, 17, 1);
    const auto ex = simulate_mixture(manifest, 5);
    CHECK(ex.mixture.samples.cwiseAbs().maxCoeff() <= 1.0);
    for (const auto& src : ex.reverberant_sources) {
      CHECK(src.samples.cwiseAbs().maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("example directory round trip") {
  testing::TempDir tmp("example_io");
  const auto manifest = test_manifest(tmp.path, 21, 1);
  const auto ex = simulate_mixture(manifest, 4);
  const auto dir = tmp.path / example_id(4);
  write_example(dir, ex);
  CHECK(example_complete(dir));

  const auto meta = read_example_metadata(dir);
  CHECK(meta.index == 4);
  CHECK(meta.speaker_count == ex.speaker_count());
  CHECK(meta.directions_deg.size() == ex.directions_deg.size());
  CHECK(meta.room.t60 == doctest::Approx(ex.room.t60).epsilon(1e-12));
  CHECK(meta.sample_rate == 16000);
  CHECK(meta.length == ex.mixture.length());
  CHECK(meta.gain == doctest::Approx(ex.gain).epsilon(1e-12));

  const auto mix = read_wav(dir / "mixture.wav");
  CHECK(mix.channels() == 9);
  CHECK(mix.length() == ex.mixture.length());
}
