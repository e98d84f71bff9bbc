// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmtss/errors.hpp"
#include "mmtss/room.hpp"
#include "support.hpp"

using namespace mmtss;

namespace {

// Direct O(n^2) convolution; oracle for the FFT path.
std::vector<double> convolve_naive(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

TEST_CASE("sabine conversion") {
  SUBCASE("worked example") {
    RoomSpec room;
    room.size = {5.0, 4.0, 3.0};
    room.t60 = 0.3;
    CHECK(room.volume() == doctest::Approx(60.0));
    CHECK(room.surface() == doctest::Approx(94.0));
    CHECK(sabine_absorption(room) == doctest::Approx(0.34255).epsilon(1e-4));
    CHECK(t60_to_reflectivity(room) == doctest::Approx(0.81083).epsilon(1e-4));
  }

  SUBCASE("very long t60 drives beta toward 1") {
    RoomSpec room;
    room.size = {5.0, 4.0, 3.0};
    room.t60 = 100.0;
    CHECK(sabine_absorption(room) <= 1.1e-2);
    CHECK(t60_to_reflectivity(room) == doctest::Approx(1.0).epsilon(1e-2));
  }

  SUBCASE("smallest room at t60 = 0.05 s is infeasible") {
    RoomSpec room;
    room.size = {4.0, 4.0, 2.5};
    room.t60 = 0.05;
    CHECK_THROWS_AS(sabine_absorption(room), InfeasibleT60Error);
    CHECK_THROWS_AS(t60_to_reflectivity(room), InfeasibleT60Error);
    // the Eyring and axial variants remain defined
    CHECK(t60_to_reflectivity(room, AbsorptionModel::kEyring) > 0.0);
    CHECK(axial_reflectivities(room).minCoeff() > 0.0);
  }
}

TEST_CASE("image source rir") {
  const int fs = 16000;

  SUBCASE("order zero leaves a single direct-path spike") {
    // distance chosen so the delay lands exactly on sample 80
    RoomSpec room;
    room.size = {6.0, 5.0, 3.0};
    const Eigen::Vector3d src(1.0, 2.0, 1.5);
    const Eigen::Vector3d mic(1.0 + 1.715, 2.0, 1.5);
    const auto rir = image_source_rir(room.size, 0.9, src, mic, fs, 343.0,
                                      ImageOrder::uniform(0), 4000);
    Eigen::Index peak = 0;
    double best = 0.0;
    double energy = 0.0;
    for (size_t i = 0; i < rir.size(); ++i) {
      energy += rir[i] * rir[i];
      if (std::abs(rir[i]) > best) {
        best = std::abs(rir[i]);
        peak = static_cast<Eigen::Index>(i);
      }
    }
    CHECK(peak == 80);
    CHECK(rir[80] == doctest::Approx(1.0 / (4.0 * std::numbers::pi * 1.715)).epsilon(1e-9));
    // integer delay collapses the windowed sinc to one tap
    CHECK(rir[80] * rir[80] == doctest::Approx(energy).epsilon(1e-12));
  }

  SUBCASE("beta zero equals order zero") {
    RoomSpec room;
    room.size = {6.0, 5.0, 3.0};
    const Eigen::Vector3d src(1.3, 2.1, 1.4);
    const Eigen::Vector3d mic(4.2, 3.3, 1.6);
    const auto absorbing = image_source_rir(room.size, 0.0, src, mic, fs, 343.0,
                                            ImageOrder::uniform(6), 4000);
    const auto direct = image_source_rir(room.size, 0.7, src, mic, fs, 343.0,
                                         ImageOrder::uniform(0), 4000);
    for (size_t i = 0; i < absorbing.size(); ++i) {
      CHECK(absorbing[i] == doctest::Approx(direct[i]).epsilon(1e-12));
    }
  }

  SUBCASE("direct path arrival matches the geometric delay within half a sample") {
    Prng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      RoomSpec room;
      room.size = {rng.uniform(4, 10), rng.uniform(4, 8), rng.uniform(2.5, 6)};
      room.t60 = rng.uniform(0.2, 0.5);
      const Eigen::Vector3d src(rng.uniform(0.4, room.size.x() - 0.4),
                                rng.uniform(0.4, room.size.y() - 0.4),
                                rng.uniform(0.4, room.size.z() - 0.4));
      Eigen::Vector3d mic(rng.uniform(0.4, room.size.x() - 0.4),
                          rng.uniform(0.4, room.size.y() - 0.4),
                          rng.uniform(0.4, room.size.z() - 0.4));
      if ((src - mic).norm() < 1.0) mic.z() = std::min(room.size.z() - 0.4, mic.z() + 1.0);
      const auto rir =
          simulate_rir(room, src, mic, fs, 8, default_rir_length(room, fs));
      const size_t arrival = testing::first_arrival_index(rir);
      const double geometric = (src - mic).norm() / 343.0 * fs;
      CHECK(std::abs(static_cast<double>(arrival) - geometric) <= 0.5);
    }
  }

  SUBCASE("schroeder t60 estimate lands within 25% at t60 = 0.4") {
    RoomSpec room;
    room.size = {6.0, 5.0, 3.5};
    room.t60 = 0.4;
    const auto rir = simulate_rir(room, {1.5, 1.8, 1.5}, {4.4, 3.2, 1.6}, fs,
                                  order_for_decay(room, 40.0),
                                  default_rir_length(room, fs) + 6000);
    const double est = testing::schroeder_t60(rir, fs);
    CHECK(est == doctest::Approx(0.4).epsilon(0.25));
  }

  SUBCASE("source outside the room is rejected") {
    RoomSpec room;
    room.size = {6.0, 5.0, 3.0};
    CHECK_THROWS_AS(image_source_rir(room.size, 0.8, {7.0, 1.0, 1.0}, {2.0, 2.0, 1.5}, fs,
                                     343.0, ImageOrder::uniform(2), 1000),
                    ValidationError);
  }
}

TEST_CASE("apply rir") {
  const int fs = 16000;
  MultiChannelWaveform wave;
  wave.sample_rate = fs;
  wave.samples = testing::random_vector(41, 4000).transpose();

  SUBCASE("unit impulse is the identity") {
    std::vector<double> rir(64, 0.0);
    rir[0] = 1.0;
    const auto out = apply_rir(wave, {rir});
    CHECK(out.length() == 4000 + 63);
    for (Eigen::Index n = 0; n < 4000; ++n) {
      CHECK(out.samples(0, n) == doctest::Approx(wave.samples(0, n)).epsilon(1e-12));
    }
  }

  SUBCASE("shifted impulse delays the signal") {
    std::vector<double> rir(64, 0.0);
    rir[17] = 1.0;
    const auto out = apply_rir(wave, {rir});
    for (Eigen::Index n = 0; n < 4000; ++n) {
      CHECK(out.samples(0, n + 17) == doctest::Approx(wave.samples(0, n)).epsilon(1e-12));
    }
  }

  SUBCASE("fft convolution matches the quadratic oracle") {
    std::vector<double> rir(512);
    Prng rng(42);
    for (auto& v : rir) v = rng.normal() * 0.05;
    std::vector<double> src(4000);
    for (size_t i = 0; i < src.size(); ++i) src[i] = wave.samples(0, static_cast<Eigen::Index>(i));
    const auto expect = convolve_naive(src, rir);
    const auto out = apply_rir(wave, {rir});
    REQUIRE(static_cast<size_t>(out.length()) == expect.size());
    double max_diff = 0.0;
    for (size_t i = 0; i < expect.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(out.samples(0, static_cast<Eigen::Index>(i)) - expect[i]));
    }
    CHECK(max_diff <= 1e-10);
  }

  SUBCASE("per-mic kernels give one channel each") {
    std::vector<double> a(32, 0.0), b(32, 0.0);
    a[0] = 1.0;
    b[1] = 0.5;
    const auto out = apply_rir(wave, {a, b});
    CHECK(out.channels() == 2);
  }

  SUBCASE("empty rir rejected") {
    CHECK_THROWS_AS(apply_rir(wave, {}), ValidationError);
    CHECK_THROWS_AS(apply_rir(wave, {std::vector<double>{}}), ValidationError);
  }
}
