// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_PRNG_HPP_
#define MMTSS_PRNG_HPP_

#include <cstdint>
#include <random>
#include <span>

#include "mmtss/errors.hpp"

namespace mmtss {

// Deterministic random stream. Draw mappings are implemented by hand so
// that identical (seed, stream) pairs produce identical values on every
// platform and standard library.
class Prng {
 public:
  explicit Prng(uint64_t base_seed, uint64_t stream = 0)
      : engine_(mix(base_seed, stream)) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) throw ValidationError("prng: uniform_int over empty range");
    return engine_() % n;
  }

  double normal() {
    // Box-Muller; two uniforms per call keeps the stream layout fixed.
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  size_t pick_weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw ValidationError("prng: non-positive weight total");
    const double x = uniform01() * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  // splitmix64 finalizer over the (seed, stream) pair.
  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace mmtss

#endif  // MMTSS_PRNG_HPP_
