// Copyright (c) 2026 The mac-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mac/wav.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>

#include "mac/error.h"
#include "mac/util.h"

namespace mac {

namespace {

constexpr uint16_t kFormatPcm = 1;

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

uint16_t GetU16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | p[1] << 8); }

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

bool ReadExact(std::istream& in, void* buf, size_t n) {
  in.read(static_cast<char*>(buf), static_cast<std::streamsize>(n));
  return static_cast<size_t>(in.gcount()) == n;
}

int16_t QuantizeSample(double v) {
  double r = std::nearbyint(v);
  if (r < -32768.0) r = -32768.0;
  if (r > 32767.0) r = 32767.0;
  return static_cast<int16_t>(r);
}

}  // namespace

Waveform ReadWav(std::istream& in) {
  uint8_t riff[12];
  if (!ReadExact(in, riff, sizeof(riff))) throw FormatError("WAV: truncated RIFF header");
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    throw FormatError("WAV: not a RIFF/WAVE stream");
  }

  bool have_fmt = false;
  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  std::vector<uint8_t> data;
  bool have_data = false;

  // Chunk scan: keep fmt and data, skip everything else.
  uint8_t header[8];
  while (ReadExact(in, header, sizeof(header))) {
    uint32_t chunk_size = GetU32(header + 4);
    if (std::memcmp(header, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError("WAV: fmt chunk too small");
      std::vector<uint8_t> fmt(chunk_size);
      if (!ReadExact(in, fmt.data(), fmt.size())) throw FormatError("WAV: truncated fmt chunk");
      format_tag = GetU16(fmt.data());
      channels = GetU16(fmt.data() + 2);
      sample_rate = GetU32(fmt.data() + 4);
      bits = GetU16(fmt.data() + 14);
      have_fmt = true;
    } else if (std::memcmp(header, "data", 4) == 0) {
      data.resize(chunk_size);
      if (!ReadExact(in, data.data(), data.size())) throw FormatError("WAV: truncated data chunk");
      have_data = true;
    } else {
      in.seekg(chunk_size, std::ios::cur);
      if (!in) throw FormatError("WAV: truncated chunk");
    }
    if (chunk_size % 2 == 1) in.seekg(1, std::ios::cur);  // RIFF pads to even size
    if (have_fmt && have_data) break;
  }

  if (!have_fmt) throw FormatError("WAV: missing fmt chunk");
  if (!have_data) throw FormatError("WAV: missing data chunk");
  if (format_tag != kFormatPcm) throw FormatError("WAV: only PCM supported");
  if (channels != 1) throw FormatError("WAV: only mono supported");
  if (bits != 16) throw FormatError("WAV: only 16-bit supported");
  if (sample_rate == 0) throw FormatError("WAV: zero sample rate");
  if (data.size() % 2 != 0) throw FormatError("WAV: odd data chunk size");

  Waveform wave;
  wave.sample_rate = static_cast<int>(sample_rate);
  wave.samples.resize(data.size() / 2);
  for (size_t i = 0; i < wave.samples.size(); ++i) {
    wave.samples[i] = static_cast<int16_t>(GetU16(data.data() + 2 * i));
  }
  return wave;
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot open " + path.string());
  return ReadWav(in);
}

std::string EncodeWav(const Waveform& wave) {
  if (wave.sample_rate <= 0) throw ValueError("WAV: sample rate must be positive");
  uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  PutU32(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);  // mono
  uint32_t rate = static_cast<uint32_t>(wave.sample_rate);
  PutU32(out, rate);
  PutU32(out, rate * 2);  // byte rate
  PutU16(out, 2);         // block align
  PutU16(out, 16);        // bits per sample
  out.append("data");
  PutU32(out, data_bytes);
  for (double s : wave.samples) {
    PutU16(out, static_cast<uint16_t>(QuantizeSample(s)));
  }
  return out;
}

void WriteWav(const Waveform& wave, const std::filesystem::path& path) {
  AtomicWriteFile(path, EncodeWav(wave));
}

}  // namespace mac
