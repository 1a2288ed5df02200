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

#include "mac/emission.h"

#include <cmath>
#include <cstring>
#include <limits>

#include "mac/error.h"
#include "mac/util.h"

namespace mac {

namespace {

constexpr char kMagic[4] = {'M', 'A', 'C', 'E'};
constexpr uint16_t kVersion = 1;
constexpr size_t kHeaderSize = 4 + 2 + 4 * 4 + 32;

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint16_t GetU16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | p[1] << 8); }

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

float FloatFromBits(uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

uint32_t BitsFromFloat(float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  return bits;
}

}  // namespace

EmissionMatrix::EmissionMatrix(int frames, int labels, int frame_hop, int sample_rate,
                               std::vector<float> logp, const Sha256Digest& meta_hash,
                               bool logits)
    : frames_(frames),
      labels_(labels),
      frame_hop_(frame_hop),
      sample_rate_(sample_rate),
      meta_hash_(meta_hash),
      logp_(std::move(logp)) {
  if (frames_ < 1 || labels_ < 1) throw ValueError("emission matrix must be at least 1x1");
  if (logp_.size() != static_cast<size_t>(frames_) * labels_) {
    throw ValueError("emission matrix payload size mismatch");
  }
  if (logits) {
    LogSoftmaxRows();
    normalized_ = true;
  }
  Validate();
}

void EmissionMatrix::Validate() const {
  for (float v : logp_) {
    if (std::isnan(v)) throw FormatError("emission matrix contains NaN");
    if (v > 0.0f) {
      throw FormatError("emission matrix entry " + FormatDouble(v) +
                        " > 0; pass renormalize for logit input");
    }
  }
}

void EmissionMatrix::LogSoftmaxRows() {
  for (int t = 0; t < frames_; ++t) {
    float* row = logp_.data() + static_cast<size_t>(t) * labels_;
    float max = -std::numeric_limits<float>::infinity();
    for (int k = 0; k < labels_; ++k) {
      if (std::isnan(row[k])) throw FormatError("emission matrix contains NaN");
      max = std::max(max, row[k]);
    }
    if (std::isinf(max) && max < 0) continue;  // fully impossible frame stays -inf
    double denom = 0.0;
    for (int k = 0; k < labels_; ++k) denom += std::exp(static_cast<double>(row[k]) - max);
    double log_denom = std::log(denom);
    for (int k = 0; k < labels_; ++k) {
      row[k] = static_cast<float>(row[k] - max - log_denom);
    }
  }
}

std::string EmissionMatrix::Encode() const {
  std::string out;
  out.reserve(kHeaderSize + logp_.size() * 4);
  out.append(kMagic, sizeof(kMagic));
  PutU16(out, kVersion);
  PutU32(out, static_cast<uint32_t>(frames_));
  PutU32(out, static_cast<uint32_t>(labels_));
  PutU32(out, static_cast<uint32_t>(frame_hop_));
  PutU32(out, static_cast<uint32_t>(sample_rate_));
  out.append(reinterpret_cast<const char*>(meta_hash_.data()), meta_hash_.size());
  for (float v : logp_) PutU32(out, BitsFromFloat(v));
  return out;
}

void EmissionMatrix::Save(const std::filesystem::path& path) const {
  AtomicWriteFile(path, Encode());
}

EmissionMatrix EmissionMatrix::Decode(const std::string& bytes,
                                      const std::optional<Sha256Digest>& expected_hash,
                                      bool renormalize) {
  if (bytes.size() < kHeaderSize) throw FormatError(".mace: truncated header");
  const uint8_t* p = reinterpret_cast<const uint8_t*>(bytes.data());
  if (std::memcmp(p, kMagic, sizeof(kMagic)) != 0) throw FormatError(".mace: bad magic");
  uint16_t version = GetU16(p + 4);
  if (version != kVersion) {
    throw FormatError(".mace: unsupported version " + std::to_string(version));
  }
  uint32_t frames = GetU32(p + 6);
  uint32_t labels = GetU32(p + 10);
  uint32_t frame_hop = GetU32(p + 14);
  uint32_t sample_rate = GetU32(p + 18);
  Sha256Digest hash;
  std::memcpy(hash.data(), p + 22, hash.size());
  if (frames < 1 || labels < 1) throw FormatError(".mace: zero frames or labels");

  if (expected_hash && *expected_hash != hash) {
    throw HashMismatchError(".mace: meta-audio set hash mismatch (file built against a "
                            "different set)");
  }

  size_t payload = static_cast<size_t>(frames) * labels * 4;
  if (bytes.size() != kHeaderSize + payload) {
    throw FormatError(".mace: truncated payload (" + std::to_string(bytes.size()) +
                      " bytes, expected " + std::to_string(kHeaderSize + payload) + ")");
  }
  std::vector<float> logp(static_cast<size_t>(frames) * labels);
  for (size_t i = 0; i < logp.size(); ++i) {
    logp[i] = FloatFromBits(GetU32(p + kHeaderSize + 4 * i));
  }
  return EmissionMatrix(static_cast<int>(frames), static_cast<int>(labels),
                        static_cast<int>(frame_hop), static_cast<int>(sample_rate),
                        std::move(logp), hash, renormalize);
}

EmissionMatrix EmissionMatrix::Load(const std::filesystem::path& path,
                                    const std::optional<Sha256Digest>& expected_hash,
                                    bool renormalize) {
  std::vector<uint8_t> bytes = ReadBinaryFile(path);
  return Decode(std::string(bytes.begin(), bytes.end()), expected_hash, renormalize);
}

}  // namespace mac
