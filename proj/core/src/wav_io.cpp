// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "mmtss/errors.hpp"

namespace mmtss {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
void put_le(std::vector<uint8_t>& out, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<uint8_t>((static_cast<uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Cursor {
  const uint8_t* data;
  size_t size;
  size_t pos = 0;

  bool can_read(size_t n) const { return pos + n <= size; }

  template <typename T>
  T read_le() {
    if (!can_read(sizeof(T))) throw FormatError("wav: truncated file");
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<uint64_t>(data[pos + i]) << (8 * i);
    }
    pos += sizeof(T);
    T out;
    std::memcpy(&out, &v, sizeof(T));
    return out;
  }

  std::string read_tag() {
    if (!can_read(4)) throw FormatError("wav: truncated file");
    std::string tag(reinterpret_cast<const char*>(data + pos), 4);
    pos += 4;
    return tag;
  }

  void skip(size_t n) {
    if (!can_read(n)) throw FormatError("wav: truncated chunk");
    pos += n;
  }
};

float read_f32(const uint8_t* p) {
  uint32_t bits = static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
                  static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
  float out;
  std::memcpy(&out, &bits, sizeof(out));
  return out;
}

}  // namespace

MultiChannelWaveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  Cursor cur{bytes.data(), bytes.size()};

  if (cur.read_tag() != "RIFF") throw FormatError("wav: missing RIFF tag");
  cur.read_le<uint32_t>();  // declared size, not trusted
  if (cur.read_tag() != "WAVE") throw FormatError("wav: missing WAVE tag");

  bool have_fmt = false;
  uint16_t format = 0, num_channels = 0, bits_per_sample = 0;
  uint32_t sample_rate = 0;
  const uint8_t* payload = nullptr;
  size_t payload_size = 0;

  while (cur.can_read(8)) {
    const std::string tag = cur.read_tag();
    const uint32_t chunk_size = cur.read_le<uint32_t>();
    if (tag == "fmt ") {
      if (chunk_size < 16) throw FormatError("wav: fmt chunk too small");
      Cursor fmt{cur.data + cur.pos, std::min<size_t>(chunk_size, cur.size - cur.pos)};
      format = fmt.read_le<uint16_t>();
      num_channels = fmt.read_le<uint16_t>();
      sample_rate = fmt.read_le<uint32_t>();
      fmt.read_le<uint32_t>();  // byte rate
      fmt.read_le<uint16_t>();  // block align
      bits_per_sample = fmt.read_le<uint16_t>();
      if (format == kFormatExtensible) {
        // SubFormat GUID starts with the base format code.
        if (chunk_size >= 26) {
          Cursor ext{cur.data + cur.pos + 24, cur.size - cur.pos - 24};
          format = ext.read_le<uint16_t>();
        } else {
          throw FormatError("wav: malformed extensible fmt chunk");
        }
      }
      have_fmt = true;
    } else if (tag == "data") {
      if (!cur.can_read(chunk_size)) throw FormatError("wav: truncated data chunk");
      payload = cur.data + cur.pos;
      payload_size = chunk_size;
    }
    cur.skip(std::min<size_t>(chunk_size + (chunk_size & 1), cur.size - cur.pos));
    if (payload != nullptr && have_fmt) break;
  }

  if (!have_fmt) throw FormatError("wav: missing fmt chunk");
  if (payload == nullptr) throw FormatError("wav: missing data chunk");
  if (num_channels == 0 || sample_rate == 0) {
    throw FormatError("wav: zero channel count or sample rate");
  }

  const bool pcm16 = (format == kFormatPcm && bits_per_sample == 16);
  const bool f32 = (format == kFormatFloat && bits_per_sample == 32);
  if (!pcm16 && !f32) {
    throw UnsupportedError("wav: only 16-bit PCM and 32-bit float are supported");
  }

  const size_t bytes_per_sample = pcm16 ? 2 : 4;
  const size_t frame_bytes = bytes_per_sample * num_channels;
  const size_t frames = payload_size / frame_bytes;
  if (frames == 0) throw FormatError("wav: empty data chunk");

  MultiChannelWaveform wave;
  wave.sample_rate = static_cast<int>(sample_rate);
  wave.samples.resize(num_channels, static_cast<Eigen::Index>(frames));
  for (size_t n = 0; n < frames; ++n) {
    const uint8_t* frame = payload + n * frame_bytes;
    for (size_t u = 0; u < num_channels; ++u) {
      if (pcm16) {
        int16_t v = static_cast<int16_t>(static_cast<uint16_t>(frame[2 * u]) |
                                         static_cast<uint16_t>(frame[2 * u + 1]) << 8);
        wave.samples(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(n)) =
            static_cast<double>(v) / 32768.0;
      } else {
        wave.samples(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(n)) =
            static_cast<double>(read_f32(frame + 4 * u));
      }
    }
  }
  wave.validate();
  return wave;
}

void write_wav(const std::filesystem::path& path, const MultiChannelWaveform& wave,
               WavEncoding encoding, const WavWriteOptions& options) {
  wave.validate();

  Eigen::MatrixXd samples = wave.samples;
  const double peak = samples.cwiseAbs().maxCoeff();
  if (options.normalize && peak > options.peak_target && peak > 0.0) {
    samples *= options.peak_target / peak;
  } else if (peak > 1.0) {
    if (!options.clip) {
      throw ValidationError("wav: sample magnitude exceeds 1 and clipping is disabled");
    }
    samples = samples.cwiseMax(-1.0).cwiseMin(1.0);
  }

  const auto channels = static_cast<uint16_t>(samples.rows());
  const auto frames = static_cast<uint32_t>(samples.cols());
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const uint16_t bits = pcm16 ? 16 : 32;
  const uint32_t data_size = frames * channels * (bits / 8);

  std::vector<uint8_t> out;
  out.reserve(64 + data_size);
  put_tag(out, "RIFF");
  const uint32_t fact_size = pcm16 ? 0 : 12;
  put_le<uint32_t>(out, 4 + 24 + fact_size + 8 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le<uint32_t>(out, 16);
  put_le<uint16_t>(out, pcm16 ? kFormatPcm : kFormatFloat);
  put_le<uint16_t>(out, channels);
  put_le<uint32_t>(out, static_cast<uint32_t>(wave.sample_rate));
  put_le<uint32_t>(out, static_cast<uint32_t>(wave.sample_rate) * channels * (bits / 8));
  put_le<uint16_t>(out, static_cast<uint16_t>(channels * (bits / 8)));
  put_le<uint16_t>(out, bits);
  if (!pcm16) {
    put_tag(out, "fact");
    put_le<uint32_t>(out, 4);
    put_le<uint32_t>(out, frames);
  }
  put_tag(out, "data");
  put_le<uint32_t>(out, data_size);

  for (uint32_t n = 0; n < frames; ++n) {
    for (uint16_t u = 0; u < channels; ++u) {
      const double s = samples(u, n);
      if (pcm16) {
        double scaled = std::round(s * 32768.0);
        scaled = std::clamp(scaled, -32768.0, 32767.0);
        put_le<int16_t>(out, static_cast<int16_t>(scaled));
      } else {
        const float f = static_cast<float>(s);
        uint32_t bits32;
        std::memcpy(&bits32, &f, sizeof(bits32));
        put_le<uint32_t>(out, bits32);
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("wav: cannot open for writing: " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("wav: write failed: " + path.string());
}

}  // namespace mmtss
