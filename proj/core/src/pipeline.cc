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

#include "mac/pipeline.h"

#include <ostream>
#include <random>

#include "json.hpp"
#include "mac/align.h"
#include "mac/clipdb.h"
#include "mac/digest.h"
#include "mac/emission.h"
#include "mac/error.h"
#include "mac/manifest.h"
#include "mac/synth.h"
#include "mac/util.h"
#include "mac/wav.h"

namespace mac {

namespace {

using nlohmann::json;

void RequireFile(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw ValueError(std::string(flag) + " is required");
  if (!std::filesystem::exists(path)) {
    throw ValueError(std::string(flag) + ": no such file: " + path.string());
  }
}

void RequireDir(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw ValueError(std::string(flag) + " is required");
  if (!std::filesystem::is_directory(path)) {
    throw ValueError(std::string(flag) + ": no such directory: " + path.string());
  }
}

void RequirePathSet(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw ValueError(std::string(flag) + " is required");
}

// Output trees are only written into empty or nonexistent directories unless
// the caller forces it; a typo'd path must not silently mix two runs.
void EnsureOutputDir(const std::filesystem::path& dir, bool force, const char* flag) {
  RequirePathSet(dir, flag);
  if (!std::filesystem::exists(dir)) return;
  if (!std::filesystem::is_directory(dir)) {
    throw ValueError(std::string(flag) + ": not a directory: " + dir.string());
  }
  if (!std::filesystem::is_empty(dir) && !force) {
    throw ValueError(std::string(flag) + ": directory " + dir.string() +
                     " is not empty (pass --force to write anyway)");
  }
}

struct MetaContext {
  MetaAudioSet set;
  Sha256Digest hash{};
  MergeRules rules;
  Lexicon lexicon;
};

MetaContext LoadMetaContext(const PipelineConfig& config) {
  RequireFile(config.meta_set_path, "--meta-set");
  RequireFile(config.lexicon_path, "--lexicon");
  MetaContext ctx;
  std::string meta_text = ReadTextFile(config.meta_set_path);
  ctx.set = MetaAudioSet::Parse(meta_text);
  ctx.hash = Sha256(meta_text);
  if (!config.merge_rules_path.empty()) {
    RequireFile(config.merge_rules_path, "--merge-rules");
    ctx.rules = MergeRules::Parse(ReadTextFile(config.merge_rules_path), ctx.set);
  }
  ctx.lexicon = Lexicon::Parse(ReadTextFile(config.lexicon_path), ctx.set, ctx.rules);
  return ctx;
}

std::vector<std::string> NonEmptyLines(const std::string& text) {
  std::vector<std::string> lines;
  for (const std::string& line : SplitLines(text)) {
    std::string t = Trim(line);
    if (!t.empty()) lines.push_back(std::move(t));
  }
  return lines;
}

std::filesystem::path ResolveAudio(const std::filesystem::path& base,
                                   const std::string& audio) {
  std::filesystem::path p(audio);
  return p.is_absolute() ? p : base / p;
}

// Path for the output manifest: relative to its directory when possible.
std::string RebaseAudio(const std::filesystem::path& base, const std::string& audio,
                        const std::filesystem::path& out_base) {
  std::filesystem::path abs =
      std::filesystem::absolute(ResolveAudio(base, audio)).lexically_normal();
  std::filesystem::path out_abs = std::filesystem::absolute(out_base).lexically_normal();
  std::filesystem::path rel = abs.lexically_relative(out_abs);
  return rel.empty() ? abs.string() : rel.string();
}

uint64_t EntropySeed() {
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ static_cast<uint64_t>(rd());
}

}  // namespace

int CmdBuildDb(const PipelineConfig& config, std::ostream& out) {
  if (config.sample_rate < 1) throw ValueError("--sample-rate must be positive");
  if (config.min_seg_frames < 1) throw ValueError("--min-seg-frames must be >= 1");
  RequireFile(config.manifest_path, "--manifest");
  RequireDir(config.emissions_dir, "--emissions");
  RequirePathSet(config.db_dir, "--db");
  MetaContext ctx = LoadMetaContext(config);

  std::vector<ManifestRecord> records = ReadManifest(config.manifest_path);
  std::filesystem::path base = config.manifest_path.parent_path();

  std::vector<BuildReport::SkippedUtterance> prep_skips;
  std::vector<BuildUtterance> corpus;
  for (const ManifestRecord& rec : records) {
    std::filesystem::path mace = config.emissions_dir / (rec.id + ".mace");
    if (!std::filesystem::exists(mace)) {
      prep_skips.push_back({rec.id, "missing emission file " + mace.string()});
      continue;
    }
    try {
      BuildUtterance utt;
      utt.utt_id = rec.id;
      utt.emissions =
          EmissionMatrix::Load(mace, ctx.hash, config.renormalize_emissions);
      utt.audio = ReadWav(ResolveAudio(base, rec.audio));
      utt.sequence = ctx.lexicon.MapTranscript(rec.text, config.oov_policy);
      corpus.push_back(std::move(utt));
    } catch (const Error& e) {
      prep_skips.push_back({rec.id, e.what()});
    }
  }

  BuildOptions options;
  options.min_seg_frames = config.min_seg_frames;
  options.min_clip_samples = config.min_clip_samples;
  options.log_score_floor = config.log_score_floor;
  options.threads = config.threads;
  auto [db, report] = ClipDatabase::Build(ctx.hash, ctx.set.size(),
                                          config.sample_rate, corpus, options);
  report.skipped.insert(report.skipped.begin(), prep_skips.begin(), prep_skips.end());

  bool stored = db.total_clips() > 0;
  if (stored) {
    EnsureOutputDir(config.db_dir, config.force, "--db");
    db.Persist(config.db_dir);
  }
  DbStats stats = db.Stats();

  if (config.json_output) {
    json j;
    j["clips_dropped_low_score"] = report.clips_dropped_low_score;
    j["clips_dropped_short"] = report.clips_dropped_short;
    j["clips_stored"] = report.clips_stored;
    j["coverage"] = stats.coverage;
    j["db_dir"] = stored ? config.db_dir.string() : "";
    j["total_seconds"] = stats.total_seconds;
    j["utterances_total"] = records.size();
    j["utterances_used"] = report.utterances_used;
    json skips = json::array();
    for (const auto& s : report.skipped) {
      skips.push_back({{"id", s.utt_id}, {"reason", s.reason}});
    }
    j["skipped"] = std::move(skips);
    out << j.dump() << "\n";
  } else {
    out << "utterances: " << records.size() << " total, " << report.utterances_used
        << " used, " << report.skipped.size() << " skipped\n";
    for (const auto& s : report.skipped) {
      out << "skip " << s.utt_id << ": " << s.reason << "\n";
    }
    out << "clips stored: " << report.clips_stored << " (dropped "
        << report.clips_dropped_short << " short, " << report.clips_dropped_low_score
        << " low-score)\n";
    out << "coverage: " << FormatDouble(stats.coverage) << "\n";
    out << "total clip seconds: " << FormatDouble(stats.total_seconds) << "\n";
    if (stored) {
      out << "database: " << config.db_dir.string() << "\n";
    } else {
      out << "no clips stored; database not written\n";
    }
  }
  return stored ? 0 : 2;
}

int CmdSynth(const PipelineConfig& config, std::ostream& out) {
  if (config.synth_count < 0) throw ValueError("--count must be >= 0");
  RequirePathSet(config.db_dir, "--db");
  RequireFile(config.text_corpus_path, "--texts");
  MetaContext ctx = LoadMetaContext(config);

  ClipDatabase db = ClipDatabase::Load(config.db_dir, ctx.hash);

  std::vector<std::string> texts = NonEmptyLines(ReadTextFile(config.text_corpus_path));
  std::vector<std::string> exclusions;
  if (!config.exclusions_path.empty()) {
    RequireFile(config.exclusions_path, "--exclusions");
    exclusions = NonEmptyLines(ReadTextFile(config.exclusions_path));
  }
  EmpiricalTextDist dist = EmpiricalTextDist::Build(texts, exclusions);

  uint64_t seed = config.seed_set ? config.seed : EntropySeed();
  EnsureOutputDir(config.out_dir, config.force, "--out");

  GenerateOptions options;
  options.count = config.synth_count;
  options.policy = config.policy;
  options.each_once = config.each_once;
  options.retry_cap = config.retry_cap;
  options.threads = config.threads;
  GenerateResult result =
      GenerateCorpus(db, ctx.lexicon, dist, options, SeededRng(seed), config.out_dir);

  WriteManifest(config.out_dir / "manifest.jsonl", result.manifest);
  WriteProvenance(config.out_dir / "provenance.jsonl", result.provenance);

  DbStats stats = db.Stats();
  int64_t requested = options.each_once ? static_cast<int64_t>(dist.items().size())
                                        : config.synth_count;
  if (config.json_output) {
    json j;
    j["clamped_samples"] = result.clamped_samples;
    j["db_coverage"] = stats.coverage;
    j["out_dir"] = config.out_dir.string();
    j["requested"] = requested;
    j["seed"] = seed;
    j["synthesized"] = result.manifest.size();
    j["total_seconds"] = result.total_seconds;
    json failures = json::array();
    for (const SlotFailure& f : result.failures) {
      failures.push_back(
          {{"slot", f.slot}, {"reason", f.reason}, {"transcript", f.last_transcript}});
    }
    j["failures"] = std::move(failures);
    out << j.dump() << "\n";
  } else {
    out << "seed: " << seed << "\n";
    out << "synthesized: " << result.manifest.size() << " of " << requested << "\n";
    for (const SlotFailure& f : result.failures) {
      out << "failed slot " << f.slot << " (\"" << f.last_transcript
          << "\"): " << f.reason << "\n";
    }
    out << "total seconds: " << FormatDouble(result.total_seconds) << "\n";
    out << "clamped samples: " << result.clamped_samples << "\n";
    out << "database coverage: " << FormatDouble(stats.coverage) << "\n";
    out << "output: " << config.out_dir.string() << "\n";
  }
  return result.failures.empty() ? 0 : 2;
}

int CmdMix(const PipelineConfig& config, std::ostream& out) {
  if (!(config.mix_ratio >= 0.0 && config.mix_ratio <= 1.0)) {
    throw ValueError("--ratio must be within [0, 1]");
  }
  RequireFile(config.real_manifest_path, "--real");
  RequireFile(config.synth_manifest_path, "--synth");
  RequirePathSet(config.mix_output_path, "--output");

  std::vector<ManifestRecord> real = ReadManifest(config.real_manifest_path);
  std::vector<ManifestRecord> synth = ReadManifest(config.synth_manifest_path);
  std::filesystem::path real_base = config.real_manifest_path.parent_path();
  std::filesystem::path synth_base = config.synth_manifest_path.parent_path();
  std::filesystem::path out_base = config.mix_output_path.parent_path();

  double real_seconds = 0.0;
  for (const ManifestRecord& rec : real) {
    real_seconds += ReadWav(ResolveAudio(real_base, rec.audio)).seconds();
  }

  // Take synthesized records in manifest order until the duration ratio
  // reaches the target; the result overshoots by less than one utterance.
  double synth_seconds = 0.0;
  size_t taken = 0;
  while (taken < synth.size()) {
    double total = real_seconds + synth_seconds;
    double ratio = total > 0.0 ? synth_seconds / total : 0.0;
    if (ratio >= config.mix_ratio) break;
    synth_seconds += ReadWav(ResolveAudio(synth_base, synth[taken].audio)).seconds();
    ++taken;
  }
  double total = real_seconds + synth_seconds;
  double achieved = total > 0.0 ? synth_seconds / total : 0.0;
  bool saturated = taken == synth.size() && achieved < config.mix_ratio;

  std::vector<ManifestRecord> combined;
  combined.reserve(real.size() + taken);
  for (const ManifestRecord& rec : real) {
    ManifestRecord r = rec;
    r.audio = RebaseAudio(real_base, rec.audio, out_base);
    combined.push_back(std::move(r));
  }
  for (size_t i = 0; i < taken; ++i) {
    ManifestRecord r = synth[i];
    r.audio = RebaseAudio(synth_base, synth[i].audio, out_base);
    combined.push_back(std::move(r));
  }
  if (!out_base.empty()) std::filesystem::create_directories(out_base);
  WriteManifest(config.mix_output_path, combined);

  if (config.json_output) {
    json j;
    j["achieved_ratio"] = achieved;
    j["output"] = config.mix_output_path.string();
    j["real_records"] = real.size();
    j["real_seconds"] = real_seconds;
    j["saturated"] = saturated;
    j["synth_records_taken"] = taken;
    j["synth_records_total"] = synth.size();
    j["synth_seconds"] = synth_seconds;
    j["target_ratio"] = config.mix_ratio;
    out << j.dump() << "\n";
  } else {
    out << "real: " << real.size() << " records, " << FormatDouble(real_seconds)
        << " s\n";
    out << "synthesized: " << taken << " of " << synth.size() << " records, "
        << FormatDouble(synth_seconds) << " s\n";
    out << "ratio: " << FormatDouble(achieved) << " (target "
        << FormatDouble(config.mix_ratio) << ")\n";
    if (saturated) {
      out << "warning: not enough synthesized audio to reach the target ratio\n";
    }
    out << "output: " << config.mix_output_path.string() << "\n";
  }
  return 0;
}

int CmdStats(const PipelineConfig& config, std::ostream& out) {
  RequirePathSet(config.db_dir, "--db");
  std::optional<Sha256Digest> expected;
  MetaAudioSet set;
  bool have_set = !config.meta_set_path.empty();
  if (have_set) {
    RequireFile(config.meta_set_path, "--meta-set");
    std::string meta_text = ReadTextFile(config.meta_set_path);
    set = MetaAudioSet::Parse(meta_text);
    expected = Sha256(meta_text);
  }
  ClipDatabase db = ClipDatabase::Load(config.db_dir, expected);
  DbStats stats = db.Stats();

  if (config.json_output) {
    json j;
    j["coverage"] = stats.coverage;
    j["labels"] = db.num_labels();
    j["sample_rate"] = db.sample_rate();
    j["total_clips"] = stats.total_clips;
    j["total_seconds"] = stats.total_seconds;
    json counts = json::array();
    for (int id = 0; id < db.num_labels(); ++id) {
      json entry;
      entry["id"] = id;
      if (have_set) entry["label"] = set.label(id);
      entry["clips"] = stats.per_id_counts[id];
      counts.push_back(std::move(entry));
    }
    j["per_id"] = std::move(counts);
    out << j.dump() << "\n";
  } else {
    out << "labels: " << db.num_labels() << "\n";
    out << "sample rate: " << db.sample_rate() << "\n";
    out << "clips: " << stats.total_clips << "\n";
    out << "coverage: " << FormatDouble(stats.coverage) << "\n";
    out << "total seconds: " << FormatDouble(stats.total_seconds) << "\n";
    for (int id = 0; id < db.num_labels(); ++id) {
      out << id << "\t" << (have_set ? set.label(id) : std::to_string(id)) << "\t"
          << stats.per_id_counts[id] << "\n";
    }
  }
  return 0;
}

int CmdAlign(const PipelineConfig& config, std::ostream& out) {
  if (config.min_seg_frames < 1) throw ValueError("--min-seg-frames must be >= 1");
  RequireFile(config.mace_path, "--mace");
  if (config.align_text.empty()) throw ValueError("--text is required");
  MetaContext ctx = LoadMetaContext(config);

  EmissionMatrix em =
      EmissionMatrix::Load(config.mace_path, ctx.hash, config.renormalize_emissions);
  MetaSequence seq = ctx.lexicon.MapTranscript(config.align_text, OovPolicy::kError);

  double marginal = ForwardLogProb(em, seq, config.min_seg_frames);
  Segmentation seg = ViterbiSegment(em, seq, config.min_seg_frames);
  std::vector<SampleRange> ranges = SegmentationToSamples(
      seg, em.frame_hop(), static_cast<int64_t>(em.frames()) * em.frame_hop());

  if (config.json_output) {
    json j;
    j["boundaries"] = seg.boundaries;
    j["frames"] = em.frames();
    j["log_marginal"] = marginal;
    j["log_viterbi"] = seg.log_score;
    json segments = json::array();
    for (int i = 0; i < seg.num_segments(); ++i) {
      json entry;
      entry["label"] = ctx.set.label(seq.ids[i]);
      entry["meta_id"] = seq.ids[i];
      entry["frame_begin"] = seg.boundaries[i];
      entry["frame_end"] = seg.boundaries[i + 1];
      entry["sample_begin"] = ranges[i].start;
      entry["sample_end"] = ranges[i].end;
      entry["log_score"] = seg.segment_scores[i];
      segments.push_back(std::move(entry));
    }
    j["segments"] = std::move(segments);
    out << j.dump() << "\n";
  } else {
    out << "frames: " << em.frames() << "\n";
    out << "log marginal: " << FormatDouble(marginal) << "\n";
    out << "log viterbi: " << FormatDouble(seg.log_score) << "\n";
    out << "boundaries:";
    for (int b : seg.boundaries) out << " " << b;
    out << "\n";
    for (int i = 0; i < seg.num_segments(); ++i) {
      out << "segment " << i << ": label=" << ctx.set.label(seq.ids[i]) << " frames=["
          << seg.boundaries[i] << "," << seg.boundaries[i + 1] << ") samples=["
          << ranges[i].start << "," << ranges[i].end
          << ") log_score=" << FormatDouble(seg.segment_scores[i]) << "\n";
    }
  }
  return 0;
}

}  // namespace mac
