// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_TENSOR_HPP_
#define MMTSS_TENSOR_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mmtss {

// On-disk element types of the MMTS format. c64 stores interleaved
// float32 (re, im) pairs.
enum class TensorDtype : uint8_t { kF32 = 1, kF64 = 2, kC64 = 3 };

size_t dtype_size(TensorDtype dtype);

// Dense row-major tensor with raw little-endian storage.
struct TensorBlob {
  TensorDtype dtype = TensorDtype::kF32;
  std::vector<uint64_t> shape;
  std::vector<uint8_t> data;

  uint64_t element_count() const;
  // Throws CorruptionError when data size does not match shape * dtype.
  void validate() const;

  static TensorBlob from_f32(std::span<const float> values,
                             std::vector<uint64_t> shape);
  static TensorBlob from_f64(std::span<const double> values,
                             std::vector<uint64_t> shape);
  static TensorBlob from_c64(std::span<const std::complex<float>> values,
                             std::vector<uint64_t> shape);

  std::vector<float> as_f32() const;
  std::vector<double> as_f64() const;
  std::vector<std::complex<float>> as_c64() const;
};

// Row-major flattening of an Eigen matrix into an [rows, cols] f32 blob
// and back; used for feature and embedding interchange.
TensorBlob tensor_from_matrix(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_tensor(const TensorBlob& blob);

}  // namespace mmtss

#endif  // MMTSS_TENSOR_HPP_
