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

#ifndef MAC_SAMPLER_H_
#define MAC_SAMPLER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mac/clipdb.h"
#include "mac/lexicon.h"
#include "mac/manifest.h"
#include "mac/rng.h"

namespace mac {

// How to pick among a meta-audio id's candidate clips. uniform maximizes
// acoustic diversity and is the default; best always takes the top alignment
// score (ties to the lowest ordinal); weighted draws with probability
// proportional to exp(log_score / temperature), approaching uniform as the
// temperature grows.
struct SelectionPolicy {
  enum class Kind { kUniform, kBest, kWeighted };
  Kind kind = Kind::kUniform;
  double temperature = 1.0;
};

// Text-side distribution of the framework: each transcript's probability is
// its sample frequency, multiplicity / total. Transcripts equal to an
// exclusion (after trimming) are removed entirely, so held-out test text
// never leaks into synthesis.
class EmpiricalTextDist {
 public:
  // Throws ValueError on an empty transcript or when nothing survives
  // exclusion.
  static EmpiricalTextDist Build(const std::vector<std::string>& texts,
                                 const std::vector<std::string>& exclusions);

  // Distinct transcripts in first-appearance order with multiplicities.
  const std::vector<std::pair<std::string, int64_t>>& items() const { return items_; }
  int64_t total() const { return total_; }
  double Probability(size_t item) const {
    return static_cast<double>(items_[item].second) / static_cast<double>(total_);
  }

  // Draw with replacement, exactly proportional to multiplicity (integer
  // arithmetic, no floating-point thresholds).
  const std::string& Sample(RngStream& rng) const;

 private:
  std::vector<std::pair<std::string, int64_t>> items_;
  int64_t total_ = 0;
};

// Returns the chosen candidate's ordinal; candidates must be non-empty.
int SelectClip(const std::vector<ClipRecord>& candidates,
               const SelectionPolicy& policy, RngStream& rng);

struct GenerateOptions {
  int64_t count = 0;
  SelectionPolicy policy;
  // Synthesize each distinct transcript exactly once instead of sampling;
  // count is ignored.
  bool each_once = false;
  // Attempts per slot before giving up on transcripts the database cannot
  // cover.
  int retry_cap = 10;
  int threads = 0;
  std::string id_prefix = "mac";
};

struct SlotFailure {
  int64_t slot = 0;
  std::string reason;
  std::string last_transcript;
};

struct GenerateResult {
  std::vector<ManifestRecord> manifest;
  std::vector<ProvenanceRecord> provenance;
  std::vector<SlotFailure> failures;
  int64_t clamped_samples = 0;
  double total_seconds = 0.0;
};

// Samples transcripts, synthesizes them and writes one WAV per success under
// out_dir/wav/. Slot j draws everything from rng.Stream(j), so output is
// byte-identical for a fixed seed no matter the thread count, and synthesis
// parallelizes freely. Failed slots land in failures; successes fill
// manifest and provenance in slot order.
GenerateResult GenerateCorpus(const ClipDatabase& db, const Lexicon& lexicon,
                              const EmpiricalTextDist& dist,
                              const GenerateOptions& options, const SeededRng& rng,
                              const std::filesystem::path& out_dir);

}  // namespace mac

#endif  // MAC_SAMPLER_H_
