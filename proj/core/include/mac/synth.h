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

#ifndef MAC_SYNTH_H_
#define MAC_SYNTH_H_

#include <cstdint>
#include <vector>

#include "mac/clipdb.h"
#include "mac/manifest.h"
#include "mac/sampler.h"
#include "mac/wav.h"

namespace mac {

// Clips with energy below this count as silent: they are excluded from the
// mean and passed through normalization unscaled.
inline constexpr double kSilentEnergy = 1e-12;

// L2 norm of the samples, in double precision.
double Energy(const Waveform& clip);

// Arithmetic mean of the non-silent clips' energies; 0 when all are silent.
// Throws ValueError on an empty list.
double MeanEnergy(const std::vector<Waveform>& clips);

struct NormalizedClips {
  std::vector<Waveform> clips;
  double mean_energy = 0.0;
  // Samples that hit the 16-bit rails while scaling.
  int64_t clamped_samples = 0;
};

// Rescales each non-silent clip to the common energy: clip * (E / energy).
// Samples stay real-valued; they are only clamped to the PCM range here and
// quantized when a file is written.
NormalizedClips NormalizeClips(const std::vector<Waveform>& clips);

// Joins clips back to back. All clips must share one sample rate; the result
// length is exactly the sum of the clip lengths.
Waveform Concatenate(const std::vector<Waveform>& clips);

struct SynthesizedUtterance {
  Waveform audio;
  std::vector<ClipChoice> provenance;
  int64_t clamped_samples = 0;
};

// One utterance end to end: query candidates for every element of `a`, pick
// one clip each per `policy`, energy-normalize the picks, concatenate.
// Throws CoverageError (carrying the missing ids) when any element has no
// candidates.
SynthesizedUtterance SynthesizeUtterance(const ClipDatabase& db,
                                         const MetaSequence& a,
                                         const SelectionPolicy& policy,
                                         RngStream& rng);

}  // namespace mac

#endif  // MAC_SYNTH_H_
