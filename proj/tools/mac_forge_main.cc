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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mac/error.h"
#include "mac/pipeline.h"

namespace {

// CLI-side mirror of the path/enum options; strings here, typed values in
// PipelineConfig once a subcommand runs.
struct RawOptions {
  std::string meta_set, lexicon, merge_rules, manifest, emissions, db, out;
  std::string texts, exclusions, real_manifest, synth_manifest, mix_output;
  std::string mace, align_text;
  std::string oov = "skip";
  std::string policy = "uniform";
};

void FinalizePaths(const RawOptions& raw, mac::PipelineConfig& cfg) {
  cfg.meta_set_path = raw.meta_set;
  cfg.lexicon_path = raw.lexicon;
  cfg.merge_rules_path = raw.merge_rules;
  cfg.manifest_path = raw.manifest;
  cfg.emissions_dir = raw.emissions;
  cfg.db_dir = raw.db;
  cfg.out_dir = raw.out;
  cfg.text_corpus_path = raw.texts;
  cfg.exclusions_path = raw.exclusions;
  cfg.real_manifest_path = raw.real_manifest;
  cfg.synth_manifest_path = raw.synth_manifest;
  cfg.mix_output_path = raw.mix_output;
  cfg.mace_path = raw.mace;
  cfg.align_text = raw.align_text;
  cfg.oov_policy = raw.oov == "error" ? mac::OovPolicy::kError : mac::OovPolicy::kSkip;
  if (raw.policy == "uniform") {
    cfg.policy.kind = mac::SelectionPolicy::Kind::kUniform;
  } else if (raw.policy == "best") {
    cfg.policy.kind = mac::SelectionPolicy::Kind::kBest;
  } else {
    cfg.policy.kind = mac::SelectionPolicy::Kind::kWeighted;
  }
}

void AddMetaFlags(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--meta-set", raw.meta_set, "Meta-audio set file (one label per line)");
  cmd->add_option("--lexicon", raw.lexicon, "Pronunciation lexicon (TSV)");
  cmd->add_option("--merge-rules", raw.merge_rules, "Label merge rules (TSV, optional)");
}

void AddCommonFlags(CLI::App* cmd, mac::PipelineConfig& cfg) {
  cmd->add_flag("--json", cfg.json_output, "Report as one JSON object");
  cmd->add_option("--threads", cfg.threads, "Worker thread cap (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mac-forge: concatenative speech synthesis for ASR data augmentation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file (flags win)");

  mac::PipelineConfig cfg;
  RawOptions raw;
  int exit_code = 0;

  CLI::App* build = app.add_subcommand(
      "build-db", "Align a corpus and build the meta-audio clip database");
  AddMetaFlags(build, raw);
  AddCommonFlags(build, cfg);
  build->add_option("--manifest", raw.manifest, "Aligned corpus manifest (JSON lines)")
      ->required();
  build->add_option("--emissions", raw.emissions, "Directory of <id>.mace files")
      ->required();
  build->add_option("--db", raw.db, "Output database directory")->required();
  build->add_option("--sample-rate", cfg.sample_rate, "Corpus sample rate in Hz");
  build->add_option("--min-seg-frames", cfg.min_seg_frames,
                    "Minimum frames per aligned segment");
  build->add_option("--min-clip-samples", cfg.min_clip_samples,
                    "Drop clips shorter than this many samples");
  build->add_option("--score-floor", cfg.log_score_floor,
                    "Drop segments scoring below this log-score");
  build->add_option("--oov", raw.oov, "OOV grapheme handling")
      ->check(CLI::IsMember({"error", "skip"}));
  build->add_flag("--renormalize", cfg.renormalize_emissions,
                  "Log-softmax emission rows (for models that emit logits)");
  build->add_flag("--force", cfg.force, "Write into a non-empty directory");
  build->callback([&] {
    FinalizePaths(raw, cfg);
    exit_code = mac::CmdBuildDb(cfg, std::cout);
  });

  CLI::App* synth = app.add_subcommand(
      "synth", "Sample transcripts and synthesize a training corpus");
  AddMetaFlags(synth, raw);
  AddCommonFlags(synth, cfg);
  synth->add_option("--db", raw.db, "Clip database directory")->required();
  synth->add_option("--texts", raw.texts, "Text corpus (one transcript per line)")
      ->required();
  synth->add_option("--exclusions", raw.exclusions,
                    "Transcripts to exclude (e.g. the test split)");
  synth->add_option("--out", raw.out, "Output directory")->required();
  CLI::Option* seed_opt = synth->add_option("--seed", cfg.seed, "Master RNG seed");
  synth->add_option("--count,-M", cfg.synth_count, "Utterances to synthesize");
  synth->add_flag("--each-once", cfg.each_once,
                  "Synthesize each distinct transcript exactly once");
  synth->add_option("--policy", raw.policy, "Clip selection policy")
      ->check(CLI::IsMember({"uniform", "best", "weighted"}));
  synth->add_option("--temperature", cfg.policy.temperature,
                    "Weighted-policy temperature");
  synth->add_option("--retry-cap", cfg.retry_cap,
                    "Attempts per slot before reporting failure");
  synth->add_flag("--force", cfg.force, "Write into a non-empty directory");
  synth->callback([&] {
    FinalizePaths(raw, cfg);
    cfg.seed_set = seed_opt->count() > 0;
    exit_code = mac::CmdSynth(cfg, std::cout);
  });

  CLI::App* mix = app.add_subcommand(
      "mix", "Combine real and synthesized manifests at a duration ratio");
  AddCommonFlags(mix, cfg);
  mix->add_option("--real", raw.real_manifest, "Real-corpus manifest")->required();
  mix->add_option("--synth", raw.synth_manifest, "Synthesized-corpus manifest")
      ->required();
  mix->add_option("--output", raw.mix_output, "Combined manifest path")->required();
  mix->add_option("--ratio", cfg.mix_ratio,
                  "Target synthesized share of total duration, in [0, 1]");
  mix->callback([&] {
    FinalizePaths(raw, cfg);
    exit_code = mac::CmdMix(cfg, std::cout);
  });

  CLI::App* stats = app.add_subcommand("stats", "Report clip database statistics");
  AddCommonFlags(stats, cfg);
  stats->add_option("--db", raw.db, "Clip database directory")->required();
  stats->add_option("--meta-set", raw.meta_set,
                    "Meta-audio set file (verifies the hash, adds label names)");
  stats->callback([&] {
    FinalizePaths(raw, cfg);
    exit_code = mac::CmdStats(cfg, std::cout);
  });

  CLI::App* align = app.add_subcommand(
      "align", "Score and segment one utterance against its transcript");
  AddMetaFlags(align, raw);
  AddCommonFlags(align, cfg);
  align->add_option("--mace", raw.mace, "Emission matrix file")->required();
  align->add_option("--text", raw.align_text, "Transcript to align")->required();
  align->add_option("--min-seg-frames", cfg.min_seg_frames,
                    "Minimum frames per aligned segment");
  align->add_flag("--renormalize", cfg.renormalize_emissions,
                  "Log-softmax emission rows (for models that emit logits)");
  align->callback([&] {
    FinalizePaths(raw, cfg);
    exit_code = mac::CmdAlign(cfg, std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const mac::ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mac::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
