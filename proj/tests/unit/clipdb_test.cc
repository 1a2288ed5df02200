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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mac/error.h"
#include "mac/util.h"
#include "support/test_util.h"

using mac::BuildOptions;
using mac::BuildUtterance;
using mac::ClipDatabase;
using mac::ClipRecord;
using mac::MetaSequence;
using mac::Waveform;
using mac::test::MakeEmissions;
using mac::test::TempDir;

namespace {

constexpr int kRate = 16000;
constexpr int kHop = 10;

const mac::Sha256Digest kHash = mac::Sha256("clipdb test meta set");

// Near-one-hot frames for `ids`, `frames_per` frames per element, and an
// audio ramp starting at `base` so payload slices are easy to predict.
BuildUtterance MakeUtterance(const std::string& utt_id,
                             const std::vector<int>& ids, int frames_per,
                             double base, int labels = 2) {
  BuildUtterance utt;
  utt.utt_id = utt_id;
  utt.sequence.ids = ids;
  std::vector<std::vector<double>> probs;
  for (int id : ids) {
    for (int f = 0; f < frames_per; ++f) {
      std::vector<double> row(labels, 0.03 / (labels - 1));
      row[id] = 0.97;
      probs.push_back(row);
    }
  }
  utt.emissions = MakeEmissions(probs, kHop, kRate, kHash);
  utt.audio.sample_rate = kRate;
  int64_t total = static_cast<int64_t>(probs.size()) * kHop;
  for (int64_t i = 0; i < total; ++i) utt.audio.samples.push_back(base + static_cast<double>(i));
  return utt;
}

BuildOptions SmallClips() {
  BuildOptions options;
  options.min_clip_samples = 1;
  return options;
}

}  // namespace

TEST_SUITE("clipdb") {

TEST_CASE("two utterances give two insertion-ordered records per id") {
  std::vector<BuildUtterance> corpus = {
      MakeUtterance("u1", {0, 1}, 2, 0.0),
      MakeUtterance("u2", {0, 1}, 2, 1000.0),
  };
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());

  CHECK(report.skipped.empty());
  CHECK(report.utterances_used == 2);
  CHECK(report.clips_stored == 4);
  CHECK(db.total_clips() == 4);

  const auto& zeros = db.Query(0);
  REQUIRE(zeros.size() == 2);
  CHECK(zeros[0].utt_id == "u1");
  CHECK(zeros[1].utt_id == "u2");
  CHECK(zeros[0].sample_range == mac::SampleRange{0, 20});
  // Payload equals the source slice.
  CHECK(zeros[1].samples.front() == 1000.0);
  CHECK(zeros[1].samples.back() == 1019.0);
  // Emission storage is float, so the analytic score only holds to ~1e-7.
  CHECK(zeros[0].log_score == doctest::Approx(2 * std::log(0.97)).epsilon(1e-6));

  double sumsq = 0.0;
  for (double s : zeros[0].samples) sumsq += s * s;
  CHECK(zeros[0].energy == doctest::Approx(std::sqrt(sumsq)).epsilon(1e-12));
}

TEST_CASE("a repeated meta id in one utterance stores two records") {
  std::vector<BuildUtterance> corpus = {MakeUtterance("u3", {0, 1, 0}, 2, 0.0)};
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  const auto& zeros = db.Query(0);
  REQUIRE(zeros.size() == 2);
  CHECK(zeros[0].utt_id == "u3");
  CHECK(zeros[1].utt_id == "u3");
  CHECK(zeros[0].sample_range == mac::SampleRange{0, 20});
  CHECK(zeros[1].sample_range == mac::SampleRange{40, 60});
}

TEST_CASE("unalignable utterances are skipped, not fatal") {
  auto bad = MakeUtterance("short", {0, 1, 0}, 2, 0.0);
  // One frame cannot hold three segments.
  bad.emissions = MakeEmissions({{0.9, 0.1}}, kHop, kRate, kHash);
  bad.audio.samples.resize(kHop);
  std::vector<BuildUtterance> corpus = {MakeUtterance("ok", {0, 1}, 2, 0.0), bad};

  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  CHECK(report.utterances_used == 1);
  REQUIRE(report.skipped.size() == 1);
  CHECK(report.skipped[0].utt_id == "short");
  CHECK_FALSE(report.skipped[0].reason.empty());
  CHECK(db.total_clips() == 2);
}

TEST_CASE("sample-rate and hash mismatches skip the utterance") {
  auto wrong_rate = MakeUtterance("rate", {0}, 2, 0.0);
  wrong_rate.audio.sample_rate = 8000;
  auto wrong_hash = MakeUtterance("hash", {0}, 2, 0.0);
  wrong_hash.emissions = MakeEmissions({{0.9, 0.1}, {0.9, 0.1}}, kHop, kRate,
                                       mac::Sha256("other set"));
  std::vector<BuildUtterance> corpus = {wrong_rate, wrong_hash};

  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  CHECK(db.total_clips() == 0);
  REQUIRE(report.skipped.size() == 2);
  CHECK(report.skipped[0].reason.find("sample rate") != std::string::npos);
  CHECK(report.skipped[1].reason.find("hash") != std::string::npos);
}

TEST_CASE("short clips are dropped and counted") {
  BuildOptions options;
  options.min_clip_samples = 25;  // segments here are 2 frames = 20 samples
  std::vector<BuildUtterance> corpus = {MakeUtterance("u1", {0, 1}, 2, 0.0)};
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, options);
  CHECK(db.total_clips() == 0);
  CHECK(report.clips_dropped_short == 2);
  CHECK(report.utterances_used == 1);
}

TEST_CASE("low-score clips are dropped when a floor is set") {
  BuildOptions options;
  options.min_clip_samples = 1;
  options.log_score_floor = 2 * std::log(0.97) - 1e-6;  // keeps exactly these
  std::vector<BuildUtterance> corpus = {MakeUtterance("u1", {0, 1}, 2, 0.0)};
  auto [keep, report_keep] = ClipDatabase::Build(kHash, 2, kRate, corpus, options);
  CHECK(keep.total_clips() == 2);
  CHECK(report_keep.clips_dropped_low_score == 0);

  options.log_score_floor = 0.0;  // everything scores below certainty
  auto [drop, report_drop] = ClipDatabase::Build(kHash, 2, kRate, corpus, options);
  CHECK(drop.total_clips() == 0);
  CHECK(report_drop.clips_dropped_low_score == 2);
}

TEST_CASE("query validates the id range") {
  ClipDatabase db(kHash, 2, kRate);
  CHECK(db.Query(0).empty());
  CHECK(db.Query(1).empty());
  CHECK_THROWS_AS(db.Query(2), mac::ValueError);
  CHECK_THROWS_AS(db.Query(-1), mac::ValueError);
}

TEST_CASE("insert validates record fields") {
  ClipDatabase db(kHash, 2, kRate);
  ClipRecord rec;
  rec.meta_id = 5;
  rec.sample_rate = kRate;
  rec.samples = {1.0};
  rec.sample_range = {0, 1};
  CHECK_THROWS_AS(db.Insert(rec), mac::ValueError);
  rec.meta_id = 0;
  rec.sample_rate = 8000;
  CHECK_THROWS_AS(db.Insert(rec), mac::ValueError);
  rec.sample_rate = kRate;
  rec.utt_id = "has\ttab";
  CHECK_THROWS_AS(db.Insert(rec), mac::ValueError);
  rec.utt_id = "fine";
  CHECK_NOTHROW(db.Insert(rec));
}

TEST_CASE("stats cover counts, seconds and coverage") {
  ClipDatabase db(kHash, 3, kRate);
  ClipRecord rec;
  rec.sample_rate = kRate;
  rec.samples.assign(16000, 100.0);
  rec.sample_range = {0, 16000};
  rec.utt_id = "u";
  rec.meta_id = 0;
  db.Insert(rec);
  rec.meta_id = 1;
  db.Insert(rec);

  auto stats = db.Stats();
  CHECK(stats.per_id_counts == std::vector<int64_t>{1, 1, 0});
  CHECK(stats.total_clips == 2);
  CHECK(stats.coverage == doctest::Approx(2.0 / 3.0));
  CHECK(stats.total_seconds == doctest::Approx(2.0));

  ClipDatabase empty(kHash, 3, kRate);
  auto empty_stats = empty.Stats();
  CHECK(empty_stats.coverage == 0.0);
  CHECK(empty_stats.total_seconds == 0.0);
}

TEST_CASE("persist then load round-trips structurally and bit-exactly") {
  std::vector<BuildUtterance> corpus = {
      MakeUtterance("u1", {0, 1}, 2, 0.0),
      MakeUtterance("u2", {1, 0}, 3, 500.0),
  };
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  TempDir dir;
  db.Persist(dir.path());

  auto loaded = ClipDatabase::Load(dir.path(), kHash);
  CHECK(loaded == db);
  CHECK(loaded.Query(0)[0].samples == db.Query(0)[0].samples);

  // Persisting the load target again must reproduce identical bytes.
  TempDir dir2;
  loaded.Persist(dir2.path());
  CHECK(mac::ReadTextFile(dir.path() / "index.tsv") ==
        mac::ReadTextFile(dir2.path() / "index.tsv"));
  CHECK(mac::ReadBinaryFile(dir.path() / "clips" / "0_0.wav") ==
        mac::ReadBinaryFile(dir2.path() / "clips" / "0_0.wav"));
}

TEST_CASE("load of an empty directory reports the missing index") {
  TempDir dir;
  try {
    ClipDatabase::Load(dir.path());
    FAIL("expected FormatError");
  } catch (const mac::FormatError& e) {
    CHECK(std::string(e.what()).find("index.tsv") != std::string::npos);
  }
}

TEST_CASE("load rejects a database built against a different set") {
  std::vector<BuildUtterance> corpus = {MakeUtterance("u1", {0}, 2, 0.0)};
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  TempDir dir;
  db.Persist(dir.path());
  CHECK_THROWS_AS(ClipDatabase::Load(dir.path(), mac::Sha256("another set")),
                  mac::HashMismatchError);
  CHECK_NOTHROW(ClipDatabase::Load(dir.path()));  // no expectation, no check
}

TEST_CASE("corrupt index lines carry their line number") {
  std::vector<BuildUtterance> corpus = {
      MakeUtterance("u1", {0, 1}, 2, 0.0),
  };
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, SmallClips());
  TempDir dir;
  db.Persist(dir.path());

  auto lines = mac::SplitLines(mac::ReadTextFile(dir.path() / "index.tsv"));
  REQUIRE(lines.size() == 2);

  SUBCASE("wrong field count") {
    mac::AtomicWriteFile(dir.path() / "index.tsv", lines[0] + "\nonly\tthree\tfields\n");
    try {
      ClipDatabase::Load(dir.path());
      FAIL("expected ParseError");
    } catch (const mac::ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  SUBCASE("unparsable score") {
    auto fields = mac::Split(lines[1], '\t', true);
    fields[4] = "not-a-number";
    std::string bad;
    for (size_t i = 0; i < fields.size(); ++i) {
      bad += fields[i];
      bad += (i + 1 < fields.size()) ? "\t" : "\n";
    }
    mac::AtomicWriteFile(dir.path() / "index.tsv", lines[0] + "\n" + bad);
    try {
      ClipDatabase::Load(dir.path());
      FAIL("expected ParseError");
    } catch (const mac::ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("index.tsv") != std::string::npos);
    }
  }

  SUBCASE("unsupported version") {
    mac::AtomicWriteFile(dir.path() / "db.meta",
                         "version=2\nsample_rate=16000\nlabels=2\n");
    CHECK_THROWS_AS(ClipDatabase::Load(dir.path()), mac::FormatError);
  }

  SUBCASE("tampered clip payload") {
    auto wave = mac::ReadWav(dir.path() / "clips" / "0_0.wav");
    for (double& s : wave.samples) s = 0.0;
    mac::WriteWav(wave, dir.path() / "clips" / "0_0.wav");
    CHECK_THROWS_AS(ClipDatabase::Load(dir.path()), mac::FormatError);
  }
}

TEST_CASE("build is deterministic across thread counts") {
  std::vector<BuildUtterance> corpus;
  for (int i = 0; i < 12; ++i) {
    corpus.push_back(MakeUtterance("u" + std::to_string(i), {i % 2, (i + 1) % 2},
                                   2 + i % 3, i * 100.0));
  }
  BuildOptions serial = SmallClips();
  serial.threads = 1;
  BuildOptions parallel = SmallClips();
  parallel.threads = 8;
  auto [db1, r1] = ClipDatabase::Build(kHash, 2, kRate, corpus, serial);
  auto [db2, r2] = ClipDatabase::Build(kHash, 2, kRate, corpus, parallel);
  CHECK(db1 == db2);

  TempDir d1, d2;
  db1.Persist(d1.path());
  db2.Persist(d2.path());
  CHECK(mac::ReadTextFile(d1.path() / "index.tsv") ==
        mac::ReadTextFile(d2.path() / "index.tsv"));
}

TEST_CASE("stored clip count reconciles with drops") {
  BuildOptions options;
  options.min_clip_samples = 25;
  std::vector<BuildUtterance> corpus = {
      MakeUtterance("u1", {0, 1}, 2, 0.0),    // 20-sample clips: both dropped
      MakeUtterance("u2", {1, 0}, 3, 100.0),  // 30-sample clips: both kept
  };
  auto [db, report] = ClipDatabase::Build(kHash, 2, kRate, corpus, options);
  CHECK(report.clips_stored == db.total_clips());
  CHECK(report.clips_stored + report.clips_dropped_short +
            report.clips_dropped_low_score ==
        4);
}

}  // TEST_SUITE
