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

// Regenerates the bundled toy corpus (data/toy in the source tree): eight
// short fake utterances over a six-unit meta-audio set, with synthetic
// near-one-hot emissions. Everything is table-driven and deterministic, so
// the emitted tree is byte-stable. The corpus is sized so that a database
// built from it covers every meta audio and synthesis never clips.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "mac/digest.h"
#include "mac/emission.h"
#include "mac/lexicon.h"
#include "mac/manifest.h"
#include "mac/util.h"
#include "mac/wav.h"

namespace {

constexpr int kSampleRate = 16000;
constexpr int kFrameHop = 160;
constexpr double kAmplitude = 8000.0;

// Labels and their tone frequencies. Distinct tones make the audio audibly
// (and numerically) distinguishable per unit.
const char* kLabels[] = {"A", "B", "K", "S", "T", "U"};
const double kFreqs[] = {262.0, 330.0, 392.0, 440.0, 494.0, 523.0};
constexpr int kNumLabels = 6;

// Every label appears, and no word has the same letter twice in a row, so
// Viterbi alignment on the synthetic emissions recovers the exact cuts.
const char* kWords[] = {"task", "stub", "bask", "tuba",
                        "skat", "abut", "tusk", "bust"};
constexpr int kNumWords = 8;

int LabelId(char c) {
  switch (c) {
    case 'a': return 0;
    case 'b': return 1;
    case 'k': return 2;
    case 's': return 3;
    case 't': return 4;
    case 'u': return 5;
  }
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 1;
  }
  namespace fs = std::filesystem;
  fs::path root = argv[1];
  fs::create_directories(root / "wav");
  fs::create_directories(root / "emissions");

  std::string meta_text;
  for (const char* label : kLabels) meta_text += std::string(label) + "\n";
  mac::AtomicWriteFile(root / "meta.txt", meta_text);
  mac::Sha256Digest meta_hash = mac::Sha256(meta_text);

  std::string lexicon_text = "#tokenize=char\n";
  const char kGraphemes[] = {'a', 'b', 'k', 's', 't', 'u'};
  for (int i = 0; i < kNumLabels; ++i) {
    lexicon_text += std::string(1, kGraphemes[i]) + "\t" + kLabels[i] + "\n";
  }
  mac::AtomicWriteFile(root / "lexicon.tsv", lexicon_text);

  std::string texts;
  for (const char* word : kWords) texts += std::string(word) + "\n";
  mac::AtomicWriteFile(root / "texts.txt", texts);

  std::vector<mac::ManifestRecord> manifest;
  for (int w = 0; w < kNumWords; ++w) {
    const std::string word = kWords[w];
    char id[16];
    std::snprintf(id, sizeof(id), "utt%03d", w + 1);

    // Segment lengths cycle 2,3,4 frames so clip durations vary but stay
    // well above the short-clip floor.
    std::vector<int> seg_frames;
    int total_frames = 0;
    for (size_t j = 0; j < word.size(); ++j) {
      int len = 2 + static_cast<int>((w + j) % 3);
      seg_frames.push_back(len);
      total_frames += len;
    }

    mac::Waveform wave;
    wave.sample_rate = kSampleRate;
    std::vector<float> logp(static_cast<size_t>(total_frames) * kNumLabels);
    const float off = std::log(0.03f / (kNumLabels - 1));
    const float on = std::log(0.97f);
    int frame = 0;
    for (size_t j = 0; j < word.size(); ++j) {
      int label = LabelId(word[j]);
      int n_samples = seg_frames[j] * kFrameHop;
      for (int s = 0; s < n_samples; ++s) {
        double t = static_cast<double>(s) / kSampleRate;
        double v = kAmplitude * std::sin(2.0 * M_PI * kFreqs[label] * t);
        wave.samples.push_back(std::nearbyint(v));
      }
      for (int f = 0; f < seg_frames[j]; ++f, ++frame) {
        for (int k = 0; k < kNumLabels; ++k) {
          logp[static_cast<size_t>(frame) * kNumLabels + k] = (k == label) ? on : off;
        }
      }
    }

    mac::WriteWav(wave, root / "wav" / (std::string(id) + ".wav"));
    mac::EmissionMatrix em(total_frames, kNumLabels, kFrameHop, kSampleRate,
                           std::move(logp), meta_hash);
    em.Save(root / "emissions" / (std::string(id) + ".mace"));

    mac::ManifestRecord rec;
    rec.id = id;
    rec.audio = "wav/" + std::string(id) + ".wav";
    rec.text = word;
    rec.source = "real";
    manifest.push_back(rec);
  }
  mac::WriteManifest(root / "manifest.jsonl", manifest);

  std::printf("wrote toy corpus (%d utterances, %d labels) to %s\n", kNumWords,
              kNumLabels, root.string().c_str());
  return 0;
}
