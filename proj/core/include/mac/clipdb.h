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

#ifndef MAC_CLIPDB_H_
#define MAC_CLIPDB_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mac/align.h"
#include "mac/digest.h"
#include "mac/emission.h"
#include "mac/lexicon.h"
#include "mac/wav.h"

namespace mac {

// One aligned clip: the realization of a single meta-audio element, cut from
// source utterance utt_id at sample_range. samples holds the raw payload
// (clips are materialized, so a database directory is self-contained).
// log_score is the segment's alignment log-score, energy its L2 norm.
struct ClipRecord {
  int meta_id = 0;
  std::string utt_id;
  SampleRange sample_range;
  std::vector<double> samples;
  double log_score = 0.0;
  double energy = 0.0;
  int sample_rate = 0;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  bool operator==(const ClipRecord&) const = default;
};

// One aligned training utterance handed to ClipDatabase::Build.
struct BuildUtterance {
  std::string utt_id;
  Waveform audio;
  MetaSequence sequence;
  EmissionMatrix emissions;
};

struct BuildOptions {
  int min_seg_frames = 1;
  // Clips shorter than this many samples are dropped (degenerate one-frame
  // slivers); 80 is 5 ms at 16 kHz.
  int64_t min_clip_samples = 80;
  // Segments scoring below this are dropped; default keeps everything.
  double log_score_floor = -std::numeric_limits<double>::infinity();
  int threads = 0;
};

// Per-utterance problems skip the utterance instead of failing the build;
// aligned corpora are noisy and one bad file should not abort a run.
struct BuildReport {
  struct SkippedUtterance {
    std::string utt_id;
    std::string reason;
  };
  std::vector<SkippedUtterance> skipped;
  int64_t utterances_used = 0;
  int64_t clips_stored = 0;
  int64_t clips_dropped_short = 0;
  int64_t clips_dropped_low_score = 0;
};

struct DbStats {
  std::vector<int64_t> per_id_counts;
  int64_t total_clips = 0;
  double total_seconds = 0.0;
  // Fraction of meta-audio ids with at least one clip.
  double coverage = 0.0;
};

// The persistent index from meta-audio id to every clip ever aligned to it.
// All variants of an id are kept; selection happens at synthesis time.
// Candidates stay in insertion order, so a clip is addressable as
// (meta_id, ordinal) and provenance records survive persist/load.
//
// Directory layout: meta.hash (hex SHA-256 of the meta-audio set file),
// db.meta (version/sample_rate/labels as key=value), index.tsv
// ("meta_id<TAB>utt_id<TAB>start<TAB>end<TAB>log_score<TAB>energy<TAB>clipfile",
// grouped by id in candidate order), clips/<meta_id>_<ordinal>.wav.
class ClipDatabase {
 public:
  ClipDatabase() = default;
  ClipDatabase(const Sha256Digest& meta_hash, int num_labels, int sample_rate);

  // Aligns every utterance (data-parallel), cuts clips at the Viterbi
  // boundaries and stores them. Utterances whose sample rate or meta-set
  // hash disagrees, or that cannot be aligned, are reported and skipped.
  static std::pair<ClipDatabase, BuildReport> Build(
      const Sha256Digest& meta_hash, int num_labels, int sample_rate,
      const std::vector<BuildUtterance>& corpus, const BuildOptions& options);

  int num_labels() const { return num_labels_; }
  int sample_rate() const { return sample_rate_; }
  const Sha256Digest& meta_hash() const { return meta_hash_; }
  int64_t total_clips() const;

  // All candidates for one id, insertion-ordered, possibly empty. Throws
  // ValueError when meta_id is out of range.
  const std::vector<ClipRecord>& Query(int meta_id) const;

  // Single-writer; record.meta_id must be in range and the sample rate must
  // match the database's.
  void Insert(ClipRecord record);

  DbStats Stats() const;

  void Persist(const std::filesystem::path& dir) const;
  // Throws FormatError for missing/corrupt pieces (index errors carry the
  // line number via ParseError) and HashMismatchError when expected_hash
  // differs from the stored one.
  static ClipDatabase Load(const std::filesystem::path& dir,
                           const std::optional<Sha256Digest>& expected_hash = std::nullopt);

  bool operator==(const ClipDatabase& other) const;

 private:
  Sha256Digest meta_hash_{};
  int num_labels_ = 0;
  int sample_rate_ = 0;
  std::vector<std::vector<ClipRecord>> index_;
};

}  // namespace mac

#endif  // MAC_CLIPDB_H_
