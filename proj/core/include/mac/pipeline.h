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

#ifndef MAC_PIPELINE_H_
#define MAC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>

#include "mac/lexicon.h"
#include "mac/sampler.h"

namespace mac {

// Everything the commands need, filled from CLI flags (and an optional
// key=value config file, flags winning). Commands read only the fields they
// use.
struct PipelineConfig {
  std::filesystem::path meta_set_path;
  std::filesystem::path lexicon_path;
  std::filesystem::path merge_rules_path;   // optional
  std::filesystem::path manifest_path;      // aligned real corpus (build-db)
  std::filesystem::path emissions_dir;
  std::filesystem::path db_dir;
  std::filesystem::path out_dir;            // synth output tree
  std::filesystem::path text_corpus_path;   // transcripts to synthesize from
  std::filesystem::path exclusions_path;    // optional
  std::filesystem::path real_manifest_path; // mix input
  std::filesystem::path synth_manifest_path;// mix input
  std::filesystem::path mix_output_path;    // mix output manifest
  std::filesystem::path mace_path;          // align input
  std::string align_text;                   // align transcript

  int sample_rate = 16000;
  int min_seg_frames = 1;
  int64_t min_clip_samples = 80;
  double log_score_floor = -std::numeric_limits<double>::infinity();
  OovPolicy oov_policy = OovPolicy::kSkip;
  SelectionPolicy policy;
  uint64_t seed = 0;
  bool seed_set = false;
  int64_t synth_count = 0;
  bool each_once = false;
  int retry_cap = 10;
  double mix_ratio = 0.5;
  bool force = false;
  bool json_output = false;
  int threads = 0;
  bool renormalize_emissions = false;
};

// Commands print their report to `out` (line-oriented text, or one JSON
// object with json_output) and return the process exit code: 0 success,
// 2 for data-level failures they can describe. Config misuse surfaces as
// thrown ValueError; other library errors propagate too, and the CLI maps
// ValueError to exit 1, everything else to exit 2.
int CmdBuildDb(const PipelineConfig& config, std::ostream& out);
int CmdSynth(const PipelineConfig& config, std::ostream& out);
int CmdMix(const PipelineConfig& config, std::ostream& out);
int CmdStats(const PipelineConfig& config, std::ostream& out);
int CmdAlign(const PipelineConfig& config, std::ostream& out);

}  // namespace mac

#endif  // MAC_PIPELINE_H_
