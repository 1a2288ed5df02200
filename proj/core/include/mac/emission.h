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

#ifndef MAC_EMISSION_H_
#define MAC_EMISSION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mac/digest.h"

namespace mac {

// Frame-level natural-log posteriors over meta-audio labels, produced by an
// external acoustic model. Row t holds the scores of frame t for every label;
// label order matches the meta-audio set file the embedded digest refers to.
//
// .mace layout, all integers little-endian:
//   "MACE"  u16 version=1  u32 frames  u32 labels  u32 frame_hop
//   u32 sample_rate  32-byte SHA-256 of the meta-audio set file
//   frames*labels float32 log-posteriors, row-major
class EmissionMatrix {
 public:
  EmissionMatrix() = default;
  // Validates shape and, unless `logits` is set, that every entry is <= 0 or
  // -inf. With `logits`, rows are log-softmax normalized on construction.
  EmissionMatrix(int frames, int labels, int frame_hop, int sample_rate,
                 std::vector<float> logp, const Sha256Digest& meta_hash,
                 bool logits = false);

  int frames() const { return frames_; }
  int labels() const { return labels_; }
  int frame_hop() const { return frame_hop_; }
  int sample_rate() const { return sample_rate_; }
  bool normalized() const { return normalized_; }
  const Sha256Digest& meta_hash() const { return meta_hash_; }

  double LogProb(int frame, int label) const {
    return logp_[static_cast<size_t>(frame) * labels_ + label];
  }

  // Throws FormatError on bad magic / version / truncation / out-of-domain
  // values, HashMismatchError when expected_hash differs from the embedded
  // one. renormalize lifts the <= 0 requirement and log-softmaxes each row.
  static EmissionMatrix Load(const std::filesystem::path& path,
                             const std::optional<Sha256Digest>& expected_hash = std::nullopt,
                             bool renormalize = false);
  static EmissionMatrix Decode(const std::string& bytes,
                               const std::optional<Sha256Digest>& expected_hash = std::nullopt,
                               bool renormalize = false);

  std::string Encode() const;
  void Save(const std::filesystem::path& path) const;

 private:
  void Validate() const;
  void LogSoftmaxRows();

  int frames_ = 0;
  int labels_ = 0;
  int frame_hop_ = 0;
  int sample_rate_ = 0;
  bool normalized_ = false;
  Sha256Digest meta_hash_{};
  std::vector<float> logp_;
};

}  // namespace mac

#endif  // MAC_EMISSION_H_
