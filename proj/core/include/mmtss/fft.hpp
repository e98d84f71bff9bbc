// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_FFT_HPP_
#define MMTSS_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace mmtss::fft {

// Forward DFT, unscaled: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n).
// Power-of-two sizes run radix-2 in place; other sizes go through
// Bluestein's chirp-z algorithm.
void fft_inplace(std::vector<std::complex<double>>& x);

// Inverse DFT including the 1/n factor.
void ifft_inplace(std::vector<std::complex<double>>& x);

// Real-input DFT of x zero-padded (or truncated) to n samples; returns
// the one-sided half spectrum of n/2 + 1 bins for even n.
std::vector<std::complex<double>> rfft(std::span<const double> x, size_t n);

// Inverse of rfft; returns n real samples.
std::vector<double> irfft(std::span<const std::complex<double>> half, size_t n);

// Full linear convolution (length |a| + |b| - 1) via zero-padded FFTs.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

}  // namespace mmtss::fft

#endif  // MMTSS_FFT_HPP_
