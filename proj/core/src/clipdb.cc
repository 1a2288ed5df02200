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

#include "mac/clipdb.h"

#include <algorithm>
#include <cmath>

#include "mac/error.h"
#include "mac/synth.h"
#include "mac/util.h"

namespace mac {

namespace {

// One aligned utterance's contribution, computed in parallel and merged in
// corpus order so the database is identical no matter the thread count.
struct UtteranceResult {
  std::vector<ClipRecord> clips;
  std::string skip_reason;
  int64_t dropped_short = 0;
  int64_t dropped_low_score = 0;
};

UtteranceResult ProcessUtterance(const BuildUtterance& utt,
                                 const Sha256Digest& meta_hash, int sample_rate,
                                 const BuildOptions& options) {
  UtteranceResult result;
  if (utt.audio.sample_rate != sample_rate) {
    result.skip_reason = "sample rate " + std::to_string(utt.audio.sample_rate) +
                         " != database rate " + std::to_string(sample_rate);
    return result;
  }
  if (utt.emissions.meta_hash() != meta_hash) {
    result.skip_reason = "emission meta-audio set hash mismatch";
    return result;
  }
  if (utt.emissions.sample_rate() != sample_rate) {
    result.skip_reason = "emission sample rate " +
                         std::to_string(utt.emissions.sample_rate()) +
                         " != database rate " + std::to_string(sample_rate);
    return result;
  }

  Segmentation seg;
  try {
    seg = ViterbiSegment(utt.emissions, utt.sequence, options.min_seg_frames);
  } catch (const Error& e) {
    result.skip_reason = e.what();
    return result;
  }

  std::vector<SampleRange> ranges =
      SegmentationToSamples(seg, utt.emissions.frame_hop(), utt.audio.size());
  int64_t min_len = std::max<int64_t>(options.min_clip_samples, 1);
  for (size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i].length() < min_len) {
      ++result.dropped_short;
      continue;
    }
    if (seg.segment_scores[i] < options.log_score_floor) {
      ++result.dropped_low_score;
      continue;
    }
    ClipRecord rec;
    rec.meta_id = utt.sequence.ids[i];
    rec.utt_id = utt.utt_id;
    rec.sample_range = ranges[i];
    rec.samples.assign(utt.audio.samples.begin() + ranges[i].start,
                       utt.audio.samples.begin() + ranges[i].end);
    rec.log_score = seg.segment_scores[i];
    rec.sample_rate = sample_rate;
    rec.energy = Energy(Waveform{rec.samples, sample_rate});
    result.clips.push_back(std::move(rec));
  }
  return result;
}

}  // namespace

ClipDatabase::ClipDatabase(const Sha256Digest& meta_hash, int num_labels,
                           int sample_rate)
    : meta_hash_(meta_hash), num_labels_(num_labels), sample_rate_(sample_rate) {
  if (num_labels < 1) throw ValueError("database needs at least one meta-audio label");
  if (sample_rate < 1) throw ValueError("database sample rate must be positive");
  index_.resize(num_labels);
}

std::pair<ClipDatabase, BuildReport> ClipDatabase::Build(
    const Sha256Digest& meta_hash, int num_labels, int sample_rate,
    const std::vector<BuildUtterance>& corpus, const BuildOptions& options) {
  ClipDatabase db(meta_hash, num_labels, sample_rate);
  BuildReport report;

  std::vector<UtteranceResult> results(corpus.size());
  ParallelFor(static_cast<int64_t>(corpus.size()), options.threads, [&](int64_t i) {
    results[i] = ProcessUtterance(corpus[i], meta_hash, sample_rate, options);
  });

  for (size_t i = 0; i < corpus.size(); ++i) {
    UtteranceResult& r = results[i];
    if (!r.skip_reason.empty()) {
      report.skipped.push_back({corpus[i].utt_id, r.skip_reason});
      continue;
    }
    ++report.utterances_used;
    report.clips_dropped_short += r.dropped_short;
    report.clips_dropped_low_score += r.dropped_low_score;
    for (ClipRecord& rec : r.clips) {
      db.Insert(std::move(rec));
      ++report.clips_stored;
    }
  }
  return {std::move(db), std::move(report)};
}

int64_t ClipDatabase::total_clips() const {
  int64_t total = 0;
  for (const auto& records : index_) total += static_cast<int64_t>(records.size());
  return total;
}

const std::vector<ClipRecord>& ClipDatabase::Query(int meta_id) const {
  if (meta_id < 0 || meta_id >= num_labels_) {
    throw ValueError("meta id " + std::to_string(meta_id) +
                     " out of range for database with " +
                     std::to_string(num_labels_) + " labels");
  }
  return index_[meta_id];
}

void ClipDatabase::Insert(ClipRecord record) {
  if (record.meta_id < 0 || record.meta_id >= num_labels_) {
    throw ValueError("meta id " + std::to_string(record.meta_id) +
                     " out of range for database with " +
                     std::to_string(num_labels_) + " labels");
  }
  if (record.sample_rate != sample_rate_) {
    throw ValueError("clip sample rate " + std::to_string(record.sample_rate) +
                     " != database rate " + std::to_string(sample_rate_));
  }
  if (record.utt_id.find_first_of("\t\r\n") != std::string::npos) {
    throw ValueError("utterance id contains tab or newline: " + record.utt_id);
  }
  index_[record.meta_id].push_back(std::move(record));
}

DbStats ClipDatabase::Stats() const {
  DbStats stats;
  stats.per_id_counts.resize(num_labels_, 0);
  int covered = 0;
  for (int id = 0; id < num_labels_; ++id) {
    stats.per_id_counts[id] = static_cast<int64_t>(index_[id].size());
    stats.total_clips += stats.per_id_counts[id];
    if (!index_[id].empty()) ++covered;
    for (const ClipRecord& rec : index_[id]) stats.total_seconds += rec.seconds();
  }
  stats.coverage = num_labels_ > 0 ? static_cast<double>(covered) / num_labels_ : 0.0;
  return stats;
}

void ClipDatabase::Persist(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir / "clips");

  AtomicWriteFile(dir / "meta.hash", DigestToHex(meta_hash_) + "\n");
  AtomicWriteFile(dir / "db.meta", "version=1\nsample_rate=" +
                                       std::to_string(sample_rate_) + "\nlabels=" +
                                       std::to_string(num_labels_) + "\n");

  std::string index_text;
  for (int id = 0; id < num_labels_; ++id) {
    for (size_t ordinal = 0; ordinal < index_[id].size(); ++ordinal) {
      const ClipRecord& rec = index_[id][ordinal];
      std::string clipfile =
          "clips/" + std::to_string(id) + "_" + std::to_string(ordinal) + ".wav";
      index_text += std::to_string(id);
      index_text += '\t';
      index_text += rec.utt_id;
      index_text += '\t';
      index_text += std::to_string(rec.sample_range.start);
      index_text += '\t';
      index_text += std::to_string(rec.sample_range.end);
      index_text += '\t';
      index_text += FormatDouble(rec.log_score);
      index_text += '\t';
      index_text += FormatDouble(rec.energy);
      index_text += '\t';
      index_text += clipfile;
      index_text += '\n';
      WriteWav(Waveform{rec.samples, rec.sample_rate}, dir / clipfile);
    }
  }
  AtomicWriteFile(dir / "index.tsv", index_text);
}

ClipDatabase ClipDatabase::Load(const std::filesystem::path& dir,
                                const std::optional<Sha256Digest>& expected_hash) {
  if (!std::filesystem::exists(dir / "index.tsv")) {
    throw FormatError("missing index.tsv in " + dir.string());
  }
  if (!std::filesystem::exists(dir / "meta.hash")) {
    throw FormatError("missing meta.hash in " + dir.string());
  }
  if (!std::filesystem::exists(dir / "db.meta")) {
    throw FormatError("missing db.meta in " + dir.string());
  }

  Sha256Digest hash = DigestFromHex(Trim(ReadTextFile(dir / "meta.hash")));
  if (expected_hash && *expected_hash != hash) {
    throw HashMismatchError(
        "database was built against a different meta-audio set: " + dir.string());
  }

  int sample_rate = 0;
  int labels = 0;
  bool version_ok = false;
  for (const std::string& line : SplitLines(ReadTextFile(dir / "db.meta"))) {
    if (Trim(line).empty()) continue;
    std::vector<std::string> kv = Split(line, '=', true);
    if (kv.size() != 2) throw FormatError("db.meta line is not key=value: " + line);
    if (kv[0] == "version") {
      if (kv[1] != "1") throw FormatError("unsupported database version " + kv[1]);
      version_ok = true;
    } else if (kv[0] == "sample_rate") {
      sample_rate = static_cast<int>(ParseInt64(kv[1]));
    } else if (kv[0] == "labels") {
      labels = static_cast<int>(ParseInt64(kv[1]));
    }
  }
  if (!version_ok) throw FormatError("db.meta is missing the version");
  if (sample_rate < 1 || labels < 1) {
    throw FormatError("db.meta needs positive sample_rate and labels");
  }

  ClipDatabase db(hash, labels, sample_rate);
  std::vector<std::string> lines = SplitLines(ReadTextFile(dir / "index.tsv"));
  for (size_t i = 0; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i) + 1;
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = Split(lines[i], '\t', true);
    if (fields.size() != 7) {
      throw ParseError("index.tsv: expected 7 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    ClipRecord rec;
    try {
      rec.meta_id = static_cast<int>(ParseInt64(fields[0]));
      rec.utt_id = fields[1];
      rec.sample_range.start = ParseInt64(fields[2]);
      rec.sample_range.end = ParseInt64(fields[3]);
      rec.log_score = ParseDouble(fields[4]);
      rec.energy = ParseDouble(fields[5]);
    } catch (const ParseError& e) {
      throw ParseError(std::string("index.tsv: ") + e.what(), line_no);
    }
    if (rec.meta_id < 0 || rec.meta_id >= labels) {
      throw ParseError("index.tsv: meta id " + fields[0] + " out of range", line_no);
    }
    if (rec.sample_range.end <= rec.sample_range.start) {
      throw ParseError("index.tsv: empty sample range", line_no);
    }
    std::filesystem::path clip_path = dir / fields[6];
    if (!std::filesystem::exists(clip_path)) {
      throw FormatError("missing clip file " + clip_path.string());
    }
    Waveform wave = ReadWav(clip_path);
    if (wave.sample_rate != sample_rate) {
      throw FormatError("clip " + clip_path.string() + " has sample rate " +
                        std::to_string(wave.sample_rate) + ", database says " +
                        std::to_string(sample_rate));
    }
    if (wave.size() != rec.sample_range.length()) {
      throw FormatError("clip " + clip_path.string() + " length " +
                        std::to_string(wave.size()) +
                        " does not match its sample range");
    }
    rec.sample_rate = sample_rate;
    rec.samples = std::move(wave.samples);
    double recomputed = Energy(Waveform{rec.samples, sample_rate});
    if (std::fabs(recomputed - rec.energy) >
        1e-6 * std::max(1.0, std::fabs(rec.energy))) {
      throw FormatError("clip " + clip_path.string() +
                        " energy does not match the index");
    }
    db.Insert(std::move(rec));
  }
  return db;
}

bool ClipDatabase::operator==(const ClipDatabase& other) const {
  return meta_hash_ == other.meta_hash_ && num_labels_ == other.num_labels_ &&
         sample_rate_ == other.sample_rate_ && index_ == other.index_;
}

}  // namespace mac
