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

#include "mac/synth.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mac/error.h"

namespace mac {

double Energy(const Waveform& clip) {
  double sum = 0.0;
  for (double s : clip.samples) sum += s * s;
  return std::sqrt(sum);
}

double MeanEnergy(const std::vector<Waveform>& clips) {
  if (clips.empty()) throw ValueError("mean energy of an empty clip list");
  double sum = 0.0;
  int64_t counted = 0;
  for (const Waveform& clip : clips) {
    double e = Energy(clip);
    if (e < kSilentEnergy) continue;
    sum += e;
    ++counted;
  }
  return counted > 0 ? sum / static_cast<double>(counted) : 0.0;
}

NormalizedClips NormalizeClips(const std::vector<Waveform>& clips) {
  NormalizedClips result;
  result.mean_energy = MeanEnergy(clips);
  result.clips.reserve(clips.size());
  for (const Waveform& clip : clips) {
    double e = Energy(clip);
    Waveform scaled = clip;
    if (e >= kSilentEnergy) {
      double factor = result.mean_energy / e;
      for (double& s : scaled.samples) {
        s *= factor;
        if (s > 32767.0) {
          s = 32767.0;
          ++result.clamped_samples;
        } else if (s < -32768.0) {
          s = -32768.0;
          ++result.clamped_samples;
        }
      }
    }
    result.clips.push_back(std::move(scaled));
  }
  return result;
}

Waveform Concatenate(const std::vector<Waveform>& clips) {
  if (clips.empty()) throw ValueError("concatenation of an empty clip list");
  Waveform out;
  out.sample_rate = clips.front().sample_rate;
  int64_t total = 0;
  for (const Waveform& clip : clips) {
    if (clip.sample_rate != out.sample_rate) {
      throw ValueError("cannot concatenate clips at " +
                       std::to_string(clip.sample_rate) + " Hz and " +
                       std::to_string(out.sample_rate) + " Hz");
    }
    total += clip.size();
  }
  out.samples.reserve(total);
  for (const Waveform& clip : clips) {
    out.samples.insert(out.samples.end(), clip.samples.begin(), clip.samples.end());
  }
  return out;
}

SynthesizedUtterance SynthesizeUtterance(const ClipDatabase& db,
                                         const MetaSequence& a,
                                         const SelectionPolicy& policy,
                                         RngStream& rng) {
  if (a.ids.empty()) throw ValueError("cannot synthesize an empty meta sequence");

  std::set<int> missing;
  for (int id : a.ids) {
    if (db.Query(id).empty()) missing.insert(id);
  }
  if (!missing.empty()) {
    std::string what = "no clips for meta id(s):";
    for (int id : missing) what += " " + std::to_string(id);
    throw CoverageError(what, std::vector<int>(missing.begin(), missing.end()));
  }

  SynthesizedUtterance result;
  std::vector<Waveform> picks;
  picks.reserve(a.ids.size());
  for (int id : a.ids) {
    const std::vector<ClipRecord>& candidates = db.Query(id);
    int ordinal = SelectClip(candidates, policy, rng);
    const ClipRecord& rec = candidates[ordinal];
    picks.push_back(Waveform{rec.samples, rec.sample_rate});
    result.provenance.push_back({id, rec.utt_id, ordinal});
  }

  NormalizedClips normalized = NormalizeClips(picks);
  result.clamped_samples = normalized.clamped_samples;
  result.audio = Concatenate(normalized.clips);
  return result;
}

}  // namespace mac
