// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/fft.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "mmtss/errors.hpp"

namespace mmtss::fft {

namespace {

using Complex = std::complex<double>;
constexpr double kTau = 2.0 * std::numbers::pi;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Per-size tables shared across threads; creation is serialized, use is
// read-only.
struct Pow2Plan {
  std::vector<Complex> twiddles;  // exp(-2*pi*i*k/n), k < n/2
  std::vector<uint32_t> bitrev;
};

const Pow2Plan& pow2_plan(size_t n) {
  static std::mutex mu;
  static std::map<size_t, std::unique_ptr<Pow2Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto plan = std::make_unique<Pow2Plan>();
  plan->twiddles.resize(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    const double phase = -kTau * static_cast<double>(k) / static_cast<double>(n);
    plan->twiddles[k] = Complex(std::cos(phase), std::sin(phase));
  }
  plan->bitrev.resize(n);
  size_t levels = 0;
  while ((size_t{1} << levels) < n) ++levels;
  for (size_t i = 0; i < n; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < levels; ++b) r |= ((i >> b) & 1u) << (levels - 1 - b);
    plan->bitrev[i] = static_cast<uint32_t>(r);
  }
  const Pow2Plan& ref = *plan;
  cache.emplace(n, std::move(plan));
  return ref;
}

void fft_pow2(Complex* x, size_t n, bool inverse) {
  if (n <= 1) return;
  const Pow2Plan& plan = pow2_plan(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t j = plan.bitrev[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    const size_t step = n / len;
    for (size_t base = 0; base < n; base += len) {
      for (size_t j = 0; j < half; ++j) {
        Complex w = plan.twiddles[j * step];
        if (inverse) w = std::conj(w);
        const Complex t = x[base + j + half] * w;
        x[base + j + half] = x[base + j] - t;
        x[base + j] += t;
      }
    }
  }
}

// Bluestein tables for one size: chirp w[j] = exp(-i*pi*j^2/n) and the
// pre-transformed kernel of length m = next_pow2(2n - 1).
struct ChirpPlan {
  size_t m;
  std::vector<Complex> chirp;       // length n
  std::vector<Complex> kernel_fft;  // length m
};

const ChirpPlan& chirp_plan(size_t n) {
  static std::mutex mu;
  static std::map<size_t, std::unique_ptr<ChirpPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto plan = std::make_unique<ChirpPlan>();
  plan->m = next_pow2(2 * n - 1);
  plan->chirp.resize(n);
  for (size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the phase argument small and exact.
    const uint64_t q = (static_cast<uint64_t>(j) * j) % (2 * n);
    const double phase = -std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
    plan->chirp[j] = Complex(std::cos(phase), std::sin(phase));
  }
  std::vector<Complex> kernel(plan->m, Complex(0.0, 0.0));
  for (size_t j = 0; j < n; ++j) {
    const Complex b = std::conj(plan->chirp[j]);
    kernel[j] = b;
    if (j != 0) kernel[plan->m - j] = b;
  }
  fft_pow2(kernel.data(), plan->m, false);
  plan->kernel_fft = std::move(kernel);
  const ChirpPlan& ref = *plan;
  cache.emplace(n, std::move(plan));
  return ref;
}

void fft_bluestein(std::vector<Complex>& x, bool inverse) {
  const size_t n = x.size();
  const ChirpPlan& plan = chirp_plan(n);

  std::vector<Complex> a(plan.m, Complex(0.0, 0.0));
  for (size_t j = 0; j < n; ++j) {
    const Complex c = inverse ? std::conj(plan.chirp[j]) : plan.chirp[j];
    a[j] = x[j] * c;
  }
  fft_pow2(a.data(), plan.m, false);
  if (inverse) {
    for (size_t j = 0; j < plan.m; ++j) a[j] *= std::conj(plan.kernel_fft[j]);
  } else {
    for (size_t j = 0; j < plan.m; ++j) a[j] *= plan.kernel_fft[j];
  }
  fft_pow2(a.data(), plan.m, true);
  const double scale = 1.0 / static_cast<double>(plan.m);
  for (size_t k = 0; k < n; ++k) {
    const Complex c = inverse ? std::conj(plan.chirp[k]) : plan.chirp[k];
    x[k] = a[k] * scale * c;
  }
}

}  // namespace

void fft_inplace(std::vector<Complex>& x) {
  if (x.empty()) throw ValidationError("fft: empty input");
  if (is_pow2(x.size())) {
    fft_pow2(x.data(), x.size(), false);
  } else {
    fft_bluestein(x, false);
  }
}

void ifft_inplace(std::vector<Complex>& x) {
  if (x.empty()) throw ValidationError("fft: empty input");
  if (is_pow2(x.size())) {
    fft_pow2(x.data(), x.size(), true);
  } else {
    fft_bluestein(x, true);
  }
  const double scale = 1.0 / static_cast<double>(x.size());
  for (Complex& v : x) v *= scale;
}

std::vector<Complex> rfft(std::span<const double> x, size_t n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("rfft: size must be even and >= 2");
  const size_t half = n / 2;
  std::vector<Complex> out(half + 1);

  if (is_pow2(n)) {
    // Pack even/odd samples into one complex transform of size n/2.
    std::vector<Complex> z(half, Complex(0.0, 0.0));
    const size_t limit = std::min(n, x.size());
    for (size_t j = 0; j < limit; ++j) {
      if (j & 1) {
        z[j / 2].imag(x[j]);
      } else {
        z[j / 2].real(x[j]);
      }
    }
    fft_pow2(z.data(), half, false);
    for (size_t f = 0; f <= half; ++f) {
      const Complex zf = z[f % half];
      const Complex zr = std::conj(z[(half - f) % half]);
      const Complex even = 0.5 * (zf + zr);
      const Complex odd = Complex(0.0, -0.5) * (zf - zr);
      const double phase = -kTau * static_cast<double>(f) / static_cast<double>(n);
      out[f] = even + Complex(std::cos(phase), std::sin(phase)) * odd;
    }
    return out;
  }

  std::vector<Complex> z(n, Complex(0.0, 0.0));
  const size_t limit = std::min(n, x.size());
  for (size_t j = 0; j < limit; ++j) z[j] = Complex(x[j], 0.0);
  fft_bluestein(z, false);
  for (size_t f = 0; f <= half; ++f) out[f] = z[f];
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> half_spec, size_t n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("irfft: size must be even and >= 2");
  const size_t half = n / 2;
  if (half_spec.size() != half + 1) {
    throw ValidationError("irfft: expected n/2 + 1 bins");
  }

  if (is_pow2(n)) {
    std::vector<Complex> z(half);
    for (size_t f = 0; f < half; ++f) {
      const Complex xf = half_spec[f];
      const Complex xr = std::conj(half_spec[half - f]);
      const Complex even = 0.5 * (xf + xr);
      const double phase = kTau * static_cast<double>(f) / static_cast<double>(n);
      const Complex odd = 0.5 * (xf - xr) * Complex(std::cos(phase), std::sin(phase));
      z[f] = even + Complex(0.0, 1.0) * odd;
    }
    fft_pow2(z.data(), half, true);
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(half);
    for (size_t k = 0; k < half; ++k) {
      out[2 * k] = z[k].real() * scale;
      out[2 * k + 1] = z[k].imag() * scale;
    }
    return out;
  }

  std::vector<Complex> z(n);
  for (size_t f = 0; f <= half; ++f) z[f] = half_spec[f];
  for (size_t f = half + 1; f < n; ++f) z[f] = std::conj(half_spec[n - f]);
  ifft_inplace(z);
  std::vector<double> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = z[k].real();
  return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("convolve: empty input");
  const size_t out_len = a.size() + b.size() - 1;
  const size_t n = std::max<size_t>(next_pow2(out_len), 2);
  auto fa = rfft(a, n);
  const auto fb = rfft(b, n);
  for (size_t f = 0; f < fa.size(); ++f) fa[f] *= fb[f];
  auto full = irfft(fa, n);
  full.resize(out_len);
  return full;
}

}  // namespace mmtss::fft
