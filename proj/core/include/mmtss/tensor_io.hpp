// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_TENSOR_IO_HPP_
#define MMTSS_TENSOR_IO_HPP_

#include <filesystem>

#include "mmtss/tensor.hpp"

namespace mmtss {

// MMTS binary layout, little-endian throughout:
//   magic   "MMTS" (4 bytes)
//   version u32 = 1
//   dtype   u8   (1 = f32, 2 = f64, 3 = c64)
//   ndim    u8
//   dims    u64 * ndim
//   payload row-major raw elements
void write_tensor(const std::filesystem::path& path, const TensorBlob& blob);
TensorBlob read_tensor(const std::filesystem::path& path);

}  // namespace mmtss

#endif  // MMTSS_TENSOR_IO_HPP_
