// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "mmtss/fft.hpp"
#include "mmtss/prng.hpp"
#include "mmtss/room.hpp"

namespace {

using namespace mmtss;

void BM_image_source_rir(benchmark::State& state) {
  RoomSpec room;
  room.size = {6.0, 5.0, 3.0};
  room.t60 = 0.4;
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_rir(room, {1.5, 1.8, 1.5}, {4.2, 3.1, 1.4}, 16000,
                                          order, default_rir_length(room, 16000)));
  }
  state.counters["images"] = std::pow(2.0 * order + 1.0, 3.0);
}
BENCHMARK(BM_image_source_rir)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_fft_convolve(benchmark::State& state) {
  Prng rng(3);
  std::vector<double> signal(static_cast<size_t>(state.range(0)));
  std::vector<double> kernel(10240);
  for (auto& v : signal) v = rng.normal();
  for (auto& v : kernel) v = rng.normal() * 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fft::convolve(signal, kernel));
  }
}
BENCHMARK(BM_fft_convolve)->Arg(16000)->Arg(64000)->Unit(benchmark::kMillisecond);

}  // namespace
