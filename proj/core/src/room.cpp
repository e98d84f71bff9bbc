// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/room.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmtss/errors.hpp"
#include "mmtss/fft.hpp"

namespace mmtss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSincHalfTaps = 40;  // 81-tap fractional-delay kernel
constexpr double kSincWindowHalf = kSincHalfTaps + 0.5;

// Image coordinates along one axis for n in [-order, order]:
// even n mirrors to n*L + s, odd n to (n+1)*L - s; |n| is the number of
// wall hits on this axis.
void axis_images(double room_len, double src, int order, std::vector<double>& coords,
                 std::vector<int>& hits) {
  coords.clear();
  hits.clear();
  for (int n = -order; n <= order; ++n) {
    const double c = (n % 2 == 0) ? n * room_len + src : (n + 1) * room_len - src;
    coords.push_back(c);
    hits.push_back(std::abs(n));
  }
}

void check_inside(const Eigen::Vector3d& p, const Eigen::Vector3d& room,
                  const char* what) {
  for (int d = 0; d < 3; ++d) {
    if (!(p(d) > 0.0 && p(d) < room(d))) {
      throw ValidationError(std::string(what) + " must lie strictly inside the room");
    }
  }
}

}  // namespace

void RoomSpec::validate() const {
  if (size.minCoeff() <= 0.0) throw ValidationError("room: dimensions must be positive");
  if (t60 <= 0.0) throw ValidationError("room: t60 must be positive");
  if (sound_speed <= 0.0) throw ValidationError("room: sound speed must be positive");
}

double sabine_absorption(const RoomSpec& room) {
  room.validate();
  const double alpha = 0.161 * room.volume() / (room.surface() * room.t60);
  if (alpha >= 1.0) {
    throw InfeasibleT60Error("t60 too small for this room under the Sabine model");
  }
  return alpha;
}

double t60_to_reflectivity(const RoomSpec& room, AbsorptionModel model) {
  room.validate();
  double alpha;
  if (model == AbsorptionModel::kSabine) {
    alpha = sabine_absorption(room);
  } else {
    alpha = 1.0 - std::exp(-0.161 * room.volume() / (room.surface() * room.t60));
  }
  return std::sqrt(1.0 - alpha);
}

Eigen::Vector3d axial_reflectivities(const RoomSpec& room) {
  room.validate();
  constexpr double kObliquePathFactor = 1.10;
  Eigen::Vector3d beta;
  for (int d = 0; d < 3; ++d) {
    beta(d) = std::pow(10.0, -3.0 * room.size(d) /
                                 (room.sound_speed * room.t60 * kObliquePathFactor));
  }
  return beta;
}

int choose_max_order(const RoomSpec& room, double beta, double direct_distance) {
  room.validate();
  if (beta <= 0.0) return 0;
  if (direct_distance <= 0.0) throw ValidationError("direct distance must be positive");
  const double min_dim = room.size.minCoeff();
  double gain = 1.0;
  for (int k = 1; k <= 12; ++k) {
    gain *= beta;
    const double shell_dist = std::max(direct_distance, k * min_dim - direct_distance);
    if (gain * direct_distance / shell_dist < 1e-3) return k;
  }
  return 12;
}

ImageOrder order_for_decay(const RoomSpec& room, double decay_db) {
  room.validate();
  const double reach = room.sound_speed * room.t60 * (decay_db / 60.0);
  ImageOrder order;
  order.x = static_cast<int>(std::ceil(reach / room.size.x())) + 1;
  order.y = static_cast<int>(std::ceil(reach / room.size.y())) + 1;
  order.z = static_cast<int>(std::ceil(reach / room.size.z())) + 1;
  return order;
}

std::vector<double> image_source_rir(const Eigen::Vector3d& room_size, double beta,
                                     const Eigen::Vector3d& src, const Eigen::Vector3d& mic,
                                     int sample_rate, double sound_speed, ImageOrder order,
                                     size_t length) {
  return image_source_rir(room_size, Eigen::Vector3d(beta, beta, beta), src, mic,
                          sample_rate, sound_speed, order, length);
}

std::vector<double> image_source_rir(const Eigen::Vector3d& room_size,
                                     const Eigen::Vector3d& beta_xyz,
                                     const Eigen::Vector3d& src, const Eigen::Vector3d& mic,
                                     int sample_rate, double sound_speed, ImageOrder order,
                                     size_t length) {
  if (room_size.minCoeff() <= 0.0) throw ValidationError("rir: room dimensions must be positive");
  if (beta_xyz.minCoeff() < 0.0 || beta_xyz.maxCoeff() >= 1.0) {
    throw ValidationError("rir: beta must lie in [0, 1)");
  }
  if (order.x < 0 || order.y < 0 || order.z < 0) {
    throw ValidationError("rir: image order must be non-negative");
  }
  if (sample_rate <= 0 || sound_speed <= 0.0) {
    throw ValidationError("rir: sample rate and sound speed must be positive");
  }
  if (length == 0) throw ValidationError("rir: zero output length");
  check_inside(src, room_size, "rir: source");
  check_inside(mic, room_size, "rir: microphone");

  std::vector<double> xs, ys, zs;
  std::vector<int> hx, hy, hz;
  axis_images(room_size.x(), src.x(), order.x, xs, hx);
  axis_images(room_size.y(), src.y(), order.y, ys, hy);
  axis_images(room_size.z(), src.z(), order.z, zs, hz);

  const auto axis_powers = [](double beta, int order_n) {
    std::vector<double> powers(static_cast<size_t>(order_n) + 1, 1.0);
    for (int k = 1; k <= order_n; ++k) {
      powers[static_cast<size_t>(k)] = powers[static_cast<size_t>(k - 1)] * beta;
    }
    return powers;
  };
  const auto pow_x = axis_powers(beta_xyz.x(), order.x);
  const auto pow_y = axis_powers(beta_xyz.y(), order.y);
  const auto pow_z = axis_powers(beta_xyz.z(), order.z);

  std::vector<double> rir(length, 0.0);
  const double samples_per_meter = sample_rate / sound_speed;
  const double win_step = kPi / kSincWindowHalf;
  const double cos_step = std::cos(win_step);
  const double sin_step = std::sin(win_step);

  for (size_t ix = 0; ix < xs.size(); ++ix) {
    const double dx = xs[ix] - mic.x();
    for (size_t iy = 0; iy < ys.size(); ++iy) {
      const double dy = ys[iy] - mic.y();
      const double dxy2 = dx * dx + dy * dy;
      const double gain_xy = pow_x[static_cast<size_t>(hx[ix])] * pow_y[static_cast<size_t>(hy[iy])];
      for (size_t iz = 0; iz < zs.size(); ++iz) {
        const double dz = zs[iz] - mic.z();
        const double dist = std::sqrt(dxy2 + dz * dz);
        if (dist < 1e-6) continue;  // degenerate coincidence
        const double amp = gain_xy * pow_z[static_cast<size_t>(hz[iz])] / (4.0 * kPi * dist);
        const double delay = dist * samples_per_meter;

        const long center = std::lround(delay);
        const double frac = delay - static_cast<double>(center);  // in [-0.5, 0.5]
        // sin(pi*(k - frac)) alternates sign with k; one sine serves all taps.
        const double sin_frac = std::sin(kPi * frac);
        // Hann window over the 81-tap support, advanced by rotation.
        double wc = std::cos((-kSincHalfTaps - frac) * win_step);
        double ws = std::sin((-kSincHalfTaps - frac) * win_step);

        for (int k = -kSincHalfTaps; k <= kSincHalfTaps; ++k) {
          const long idx = center + k;
          if (idx >= 0 && idx < static_cast<long>(length)) {
            const double x = static_cast<double>(k) - frac;
            double sinc;
            if (std::abs(x) < 1e-12) {
              sinc = 1.0;
            } else {
              const double sign = (k % 2 == 0) ? 1.0 : -1.0;
              sinc = sign * -sin_frac / (kPi * x);
            }
            const double window = 0.5 * (1.0 + wc);
            rir[static_cast<size_t>(idx)] += amp * sinc * window;
          }
          const double next_c = wc * cos_step - ws * sin_step;
          ws = wc * sin_step + ws * cos_step;
          wc = next_c;
        }
      }
    }
  }
  return rir;
}

namespace {

Eigen::Vector3d reflectivities_for(const RoomSpec& room, RirReflectionModel model) {
  switch (model) {
    case RirReflectionModel::kSabineUniform: {
      const double b = t60_to_reflectivity(room, AbsorptionModel::kSabine);
      return {b, b, b};
    }
    case RirReflectionModel::kEyringUniform: {
      const double b = t60_to_reflectivity(room, AbsorptionModel::kEyring);
      return {b, b, b};
    }
    case RirReflectionModel::kAxialDecay:
      return axial_reflectivities(room);
  }
  throw ValidationError("rir: unknown reflection model");
}

}  // namespace

std::vector<double> simulate_rir(const RoomSpec& room, const Eigen::Vector3d& src,
                                 const Eigen::Vector3d& mic, int sample_rate, int max_order,
                                 size_t length, RirReflectionModel model) {
  return simulate_rir(room, src, mic, sample_rate, ImageOrder::uniform(max_order), length,
                      model);
}

std::vector<double> simulate_rir(const RoomSpec& room, const Eigen::Vector3d& src,
                                 const Eigen::Vector3d& mic, int sample_rate, ImageOrder order,
                                 size_t length, RirReflectionModel model) {
  return image_source_rir(room.size, reflectivities_for(room, model), src, mic, sample_rate,
                          room.sound_speed, order, length);
}

size_t default_rir_length(const RoomSpec& room, int sample_rate) {
  room.validate();
  return static_cast<size_t>(room.t60 * sample_rate) + 4096;
}

MultiChannelWaveform apply_rir(const MultiChannelWaveform& wave,
                               const std::vector<std::vector<double>>& rirs) {
  wave.validate();
  if (wave.channels() != 1) throw ValidationError("apply_rir: source must be single channel");
  if (rirs.empty()) throw ValidationError("apply_rir: no RIRs given");
  const size_t rir_len = rirs.front().size();
  if (rir_len == 0) throw ValidationError("apply_rir: empty RIR");
  for (const auto& r : rirs) {
    if (r.size() != rir_len) throw ValidationError("apply_rir: RIR lengths disagree");
  }

  const auto L = static_cast<size_t>(wave.length());
  std::vector<double> src(L);
  for (size_t n = 0; n < L; ++n) src[n] = wave.samples(0, static_cast<Eigen::Index>(n));

  const size_t out_len = L + rir_len - 1;
  MultiChannelWaveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.resize(static_cast<Eigen::Index>(rirs.size()), static_cast<Eigen::Index>(out_len));
  for (size_t u = 0; u < rirs.size(); ++u) {
    const auto full = fft::convolve(src, rirs[u]);
    for (size_t n = 0; n < out_len; ++n) {
      out.samples(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(n)) = full[n];
    }
  }
  return out;
}

}  // namespace mmtss
