// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/tensor_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'M', 'T', 'S'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  std::array<uint8_t, sizeof(T)> buf;
  for (size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<uint8_t>((static_cast<uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

template <typename T>
T read_le(std::ifstream& in) {
  std::array<uint8_t, sizeof(T)> buf;
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw FormatError("mmts: truncated header");
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const TensorBlob& blob) {
  blob.validate();
  if (blob.shape.size() > 255) throw ValidationError("mmts: rank exceeds 255");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("mmts: cannot open for writing: " + path.string());
  out.write(kMagic.data(), kMagic.size());
  write_le<uint32_t>(out, kVersion);
  write_le<uint8_t>(out, static_cast<uint8_t>(blob.dtype));
  write_le<uint8_t>(out, static_cast<uint8_t>(blob.shape.size()));
  for (uint64_t d : blob.shape) write_le<uint64_t>(out, d);
  out.write(reinterpret_cast<const char*>(blob.data.data()),
            static_cast<std::streamsize>(blob.data.size()));
  if (!out) throw IoError("mmts: write failed: " + path.string());
}

TensorBlob read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("mmts: cannot open " + path.string());

  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("mmts: bad magic");
  const uint32_t version = read_le<uint32_t>(in);
  if (version != kVersion) throw FormatError("mmts: unsupported version");

  const auto dtype_code = read_le<uint8_t>(in);
  if (dtype_code < 1 || dtype_code > 3) throw FormatError("mmts: unknown dtype code");
  const auto ndim = read_le<uint8_t>(in);

  TensorBlob blob;
  blob.dtype = static_cast<TensorDtype>(dtype_code);
  blob.shape.resize(ndim);
  for (uint8_t i = 0; i < ndim; ++i) blob.shape[i] = read_le<uint64_t>(in);

  const uint64_t payload = blob.element_count() * dtype_size(blob.dtype);
  blob.data.resize(payload);
  in.read(reinterpret_cast<char*>(blob.data.data()),
          static_cast<std::streamsize>(payload));
  if (static_cast<uint64_t>(in.gcount()) != payload) {
    throw CorruptionError("mmts: payload shorter than dims declare");
  }
  // Trailing bytes also mean the dims and payload disagree.
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0) throw CorruptionError("mmts: payload longer than dims declare");
  return blob;
}

}  // namespace mmtss
