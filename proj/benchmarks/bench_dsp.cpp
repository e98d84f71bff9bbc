// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "mmtss/metrics.hpp"
#include "mmtss/pipeline.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/spatial_features.hpp"
#include "mmtss/stft.hpp"

namespace {

using namespace mmtss;

MultiChannelWaveform bench_wave(int channels, double seconds) {
  Prng rng(1);
  MultiChannelWaveform wave;
  wave.sample_rate = 16000;
  wave.samples.resize(channels, static_cast<Eigen::Index>(seconds * 16000));
  for (Eigen::Index u = 0; u < wave.channels(); ++u) {
    for (Eigen::Index n = 0; n < wave.length(); ++n) {
      wave.samples(u, n) = 0.3 * (2.0 * rng.uniform01() - 1.0);
    }
  }
  return wave;
}

void BM_stft_9ch_10s(benchmark::State& state) {
  const auto wave = bench_wave(9, 10.0);
  const StftConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft(wave, cfg));
  }
  state.counters["rtf"] = benchmark::Counter(
      10.0 * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}
BENCHMARK(BM_stft_9ch_10s)->Unit(benchmark::kMillisecond);

void BM_istft_round_trip(benchmark::State& state) {
  const auto wave = bench_wave(1, 10.0);
  const StftConfig cfg;
  const auto spec = stft(wave, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(istft(spec, cfg));
  }
}
BENCHMARK(BM_istft_round_trip)->Unit(benchmark::kMillisecond);

// The full LPS + IPD + DF + stack path; the acceptance bar is RTF < 0.05
// for 10 s of 9-channel audio.
void BM_featurize_9ch_10s(benchmark::State& state) {
  const auto wave = bench_wave(9, 10.0);
  const auto geom = default_array_geometry(16000);
  FeaturizeOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurize_mixture(wave, 63.0, std::nullopt, geom, options));
  }
  state.counters["rtf"] = benchmark::Counter(
      10.0 * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}
BENCHMARK(BM_featurize_9ch_10s)->Unit(benchmark::kMillisecond);

void BM_si_sdr_10s(benchmark::State& state) {
  Prng rng(2);
  Eigen::VectorXd ref(160000), est(160000);
  for (Eigen::Index i = 0; i < ref.size(); ++i) {
    ref(i) = rng.normal();
    est(i) = ref(i) + 0.1 * rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(si_sdr(est, ref));
  }
}
BENCHMARK(BM_si_sdr_10s)->Unit(benchmark::kMicrosecond);

}  // namespace
