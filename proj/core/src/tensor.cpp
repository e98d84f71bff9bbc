// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/tensor.hpp"

#include <cstring>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

template <typename T>
std::vector<uint8_t> to_bytes(std::span<const T> values) {
  std::vector<uint8_t> out(values.size_bytes());
  if (!values.empty()) std::memcpy(out.data(), values.data(), values.size_bytes());
  return out;
}

template <typename T>
std::vector<T> from_bytes(const std::vector<uint8_t>& data) {
  std::vector<T> out(data.size() / sizeof(T));
  if (!out.empty()) std::memcpy(out.data(), data.data(), data.size());
  return out;
}

}  // namespace

size_t dtype_size(TensorDtype dtype) {
  switch (dtype) {
    case TensorDtype::kF32: return 4;
    case TensorDtype::kF64: return 8;
    case TensorDtype::kC64: return 8;
  }
  throw ValidationError("tensor: unknown dtype");
}

uint64_t TensorBlob::element_count() const {
  uint64_t n = 1;
  for (uint64_t d : shape) n *= d;
  return n;
}

void TensorBlob::validate() const {
  const uint64_t expected = element_count() * dtype_size(dtype);
  if (data.size() != expected) {
    throw CorruptionError("tensor: payload size does not match shape");
  }
}

TensorBlob TensorBlob::from_f32(std::span<const float> values,
                                std::vector<uint64_t> shape) {
  TensorBlob blob{TensorDtype::kF32, std::move(shape), to_bytes(values)};
  blob.validate();
  return blob;
}

TensorBlob TensorBlob::from_f64(std::span<const double> values,
                                std::vector<uint64_t> shape) {
  TensorBlob blob{TensorDtype::kF64, std::move(shape), to_bytes(values)};
  blob.validate();
  return blob;
}

TensorBlob TensorBlob::from_c64(std::span<const std::complex<float>> values,
                                std::vector<uint64_t> shape) {
  TensorBlob blob{TensorDtype::kC64, std::move(shape), to_bytes(values)};
  blob.validate();
  return blob;
}

std::vector<float> TensorBlob::as_f32() const {
  if (dtype != TensorDtype::kF32) throw ValidationError("tensor: dtype is not f32");
  return from_bytes<float>(data);
}

std::vector<double> TensorBlob::as_f64() const {
  if (dtype != TensorDtype::kF64) throw ValidationError("tensor: dtype is not f64");
  return from_bytes<double>(data);
}

std::vector<std::complex<float>> TensorBlob::as_c64() const {
  if (dtype != TensorDtype::kC64) throw ValidationError("tensor: dtype is not c64");
  return from_bytes<std::complex<float>>(data);
}

TensorBlob tensor_from_matrix(const Eigen::MatrixXd& m) {
  std::vector<float> values(static_cast<size_t>(m.size()));
  size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) values[k++] = static_cast<float>(m(r, c));
  }
  return TensorBlob::from_f32(values, {static_cast<uint64_t>(m.rows()),
                                       static_cast<uint64_t>(m.cols())});
}

Eigen::MatrixXd matrix_from_tensor(const TensorBlob& blob) {
  if (blob.shape.size() != 2) throw ValidationError("tensor: expected rank-2 tensor");
  const auto values = blob.as_f32();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(blob.shape[0]),
                    static_cast<Eigen::Index>(blob.shape[1]));
  size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = values[k++];
  }
  return m;
}

}  // namespace mmtss
