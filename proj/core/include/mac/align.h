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

#ifndef MAC_ALIGN_H_
#define MAC_ALIGN_H_

#include <cstdint>
#include <vector>

#include "mac/emission.h"
#include "mac/lexicon.h"

namespace mac {

// Monotone time slicing of T frames into one segment per meta-audio element.
// boundaries has n+1 entries, strictly increasing, boundaries[0] == 0 and
// boundaries[n] == T; segment i covers frames [boundaries[i], boundaries[i+1]).
// log_score is the left-to-right sum of the chosen frame log-posteriors over
// the whole utterance; segment_scores[i] is the same sum restricted to
// segment i. Summing segment_scores can differ from log_score in the last
// ulp, so log_score is authoritative.
struct Segmentation {
  std::vector<int> boundaries;
  std::vector<double> segment_scores;
  double log_score = 0.0;

  int num_segments() const { return static_cast<int>(boundaries.size()) - 1; }
};

// Half-open range of samples [start, end) within a source waveform.
struct SampleRange {
  int64_t start = 0;
  int64_t end = 0;

  int64_t length() const { return end - start; }
  bool operator==(const SampleRange&) const = default;
};

// The two alignment quantities: the marginal over every feasible slicing and
// the best single slicing. log_viterbi <= log_marginal always.
struct AlignmentScore {
  double log_marginal = 0.0;
  double log_viterbi = 0.0;
};

// Log of the total probability of `a` under `em`, summed over every monotone
// segmentation whose segments all span >= min_seg_frames frames. Frames
// within a segment contribute independent factors. Returns -inf when every
// segmentation has zero probability. Throws InfeasibleError when
// em.frames() < a.size() * min_seg_frames, ValueError on an id >= em.labels()
// or min_seg_frames < 1.
double ForwardLogProb(const EmissionMatrix& em, const MetaSequence& a,
                      int min_seg_frames);

// Best single segmentation and its log-score. Exact score ties between
// extending the current segment and starting the next one are broken toward
// starting the next one later, which makes every earlier segment as long as
// possible: uniform emissions with T=3, n=2 give boundaries (0,2,3).
// Errors as ForwardLogProb.
Segmentation ViterbiSegment(const EmissionMatrix& em, const MetaSequence& a,
                            int min_seg_frames);

// Exhaustive enumeration of every feasible segmentation, for cross-checking
// ForwardLogProb on small instances. Refuses instances with more than
// 10^6 feasible segmentations (the message carries the count).
double BruteForceLogProb(const EmissionMatrix& em, const MetaSequence& a,
                         int min_seg_frames);

// Number of ways to slice `frames` frames into `segments` ordered segments of
// >= min_seg_frames frames each: C(slack + segments - 1, segments - 1) with
// slack = frames - segments * min_seg_frames. Returns 0 when infeasible;
// saturates at UINT64_MAX / 2 for astronomically large counts.
uint64_t CountSegmentations(int frames, int segments, int min_seg_frames);

// Left-to-right sum of frame log-posteriors under fixed boundaries. Matches
// Segmentation::log_score bit for bit when given ViterbiSegment's output.
double ScoreSegmentation(const EmissionMatrix& em, const MetaSequence& a,
                         const std::vector<int>& boundaries);

// Converts frame boundaries to sample ranges: start_i = boundaries[i] * hop,
// end_i = boundaries[i+1] * hop, both clamped to sample_count. Ranges can
// come out empty when the waveform is shorter than the frame grid implies;
// callers drop those.
std::vector<SampleRange> SegmentationToSamples(const Segmentation& seg,
                                               int frame_hop,
                                               int64_t sample_count);

}  // namespace mac

#endif  // MAC_ALIGN_H_
