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

#include "mac/sampler.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mac/error.h"
#include "mac/synth.h"
#include "mac/util.h"

namespace mac {

EmpiricalTextDist EmpiricalTextDist::Build(const std::vector<std::string>& texts,
                                           const std::vector<std::string>& exclusions) {
  std::set<std::string> excluded;
  for (const std::string& e : exclusions) excluded.insert(Trim(e));

  EmpiricalTextDist dist;
  std::map<std::string, size_t> position;
  for (size_t i = 0; i < texts.size(); ++i) {
    std::string t = Trim(texts[i]);
    if (t.empty()) {
      throw ValueError("transcript " + std::to_string(i + 1) + " is empty");
    }
    if (excluded.count(t)) continue;
    auto [it, inserted] = position.try_emplace(t, dist.items_.size());
    if (inserted) {
      dist.items_.emplace_back(t, 1);
    } else {
      ++dist.items_[it->second].second;
    }
    ++dist.total_;
  }
  if (dist.items_.empty()) {
    throw ValueError("no transcripts left after exclusion");
  }
  return dist;
}

const std::string& EmpiricalTextDist::Sample(RngStream& rng) const {
  uint64_t u = rng.UniformIndex(static_cast<uint64_t>(total_));
  for (const auto& [text, multiplicity] : items_) {
    if (u < static_cast<uint64_t>(multiplicity)) return text;
    u -= static_cast<uint64_t>(multiplicity);
  }
  return items_.back().first;  // unreachable: multiplicities sum to total_
}

int SelectClip(const std::vector<ClipRecord>& candidates,
               const SelectionPolicy& policy, RngStream& rng) {
  if (candidates.empty()) throw ValueError("clip selection from an empty candidate list");
  switch (policy.kind) {
    case SelectionPolicy::Kind::kUniform:
      return static_cast<int>(rng.UniformIndex(candidates.size()));
    case SelectionPolicy::Kind::kBest: {
      int best = 0;
      for (size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].log_score > candidates[best].log_score) {
          best = static_cast<int>(i);
        }
      }
      return best;
    }
    case SelectionPolicy::Kind::kWeighted: {
      if (!(policy.temperature > 0.0) || !std::isfinite(policy.temperature)) {
        throw ValueError("weighted selection needs a finite positive temperature");
      }
      double max_score = candidates[0].log_score;
      for (const ClipRecord& c : candidates) max_score = std::max(max_score, c.log_score);
      std::vector<double> weights(candidates.size());
      double total = 0.0;
      for (size_t i = 0; i < candidates.size(); ++i) {
        weights[i] = std::exp((candidates[i].log_score - max_score) / policy.temperature);
        total += weights[i];
      }
      double u = rng.UniformDouble() * total;
      double acc = 0.0;
      for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
      }
      return static_cast<int>(weights.size()) - 1;
    }
  }
  throw ValueError("unknown selection policy");
}

namespace {

std::string SlotId(const std::string& prefix, int64_t slot) {
  std::string digits = std::to_string(slot);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return prefix + "_" + digits;
}

struct SlotOutcome {
  bool ok = false;
  ManifestRecord manifest;
  ProvenanceRecord provenance;
  SlotFailure failure;
  double seconds = 0.0;
  int64_t clamped_samples = 0;
};

}  // namespace

GenerateResult GenerateCorpus(const ClipDatabase& db, const Lexicon& lexicon,
                              const EmpiricalTextDist& dist,
                              const GenerateOptions& options, const SeededRng& rng,
                              const std::filesystem::path& out_dir) {
  if (options.count < 0) throw ValueError("synthesis count must be >= 0");
  if (options.retry_cap < 1) throw ValueError("retry cap must be >= 1");

  int64_t slots = options.each_once ? static_cast<int64_t>(dist.items().size())
                                    : options.count;
  std::filesystem::create_directories(out_dir / "wav");

  std::vector<SlotOutcome> outcomes(slots);
  ParallelFor(slots, options.threads, [&](int64_t slot) {
    SlotOutcome& out = outcomes[slot];
    RngStream stream = rng.Stream(static_cast<uint64_t>(slot));
    int attempts = options.each_once ? 1 : options.retry_cap;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      const std::string& text = options.each_once
                                    ? dist.items()[slot].first
                                    : dist.Sample(stream);
      out.failure.last_transcript = text;
      MetaSequence seq;
      try {
        seq = lexicon.MapTranscript(text, OovPolicy::kError);
      } catch (const Error& e) {
        out.failure.reason = e.what();
        continue;
      }
      SynthesizedUtterance synth;
      try {
        synth = SynthesizeUtterance(db, seq, options.policy, stream);
      } catch (const CoverageError& e) {
        out.failure.reason = e.what();
        continue;
      }
      std::string id = SlotId(options.id_prefix, slot);
      std::string rel = "wav/" + id + ".wav";
      WriteWav(synth.audio, out_dir / rel);
      out.manifest = {id, rel, text, "mac", ""};
      out.provenance = {id, seq.ids, std::move(synth.provenance)};
      out.manifest.provenance = ProvenanceDigest(out.provenance);
      out.seconds = synth.audio.seconds();
      out.clamped_samples = synth.clamped_samples;
      out.ok = true;
      break;
    }
    if (!out.ok) out.failure.slot = slot;
  });

  GenerateResult result;
  for (SlotOutcome& out : outcomes) {
    if (out.ok) {
      result.manifest.push_back(std::move(out.manifest));
      result.provenance.push_back(std::move(out.provenance));
      result.total_seconds += out.seconds;
      result.clamped_samples += out.clamped_samples;
    } else {
      result.failures.push_back(std::move(out.failure));
    }
  }
  return result;
}

}  // namespace mac
