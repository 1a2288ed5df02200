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

#include "mac/align.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mac/error.h"

namespace mac {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr uint64_t kCountSaturation = UINT64_MAX / 2;
constexpr uint64_t kBruteForceGuard = 1000000;

// Exact when one side is -inf, required so a single feasible path gives a
// marginal bit-identical to its Viterbi score.
double LogAdd(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  double hi = std::max(x, y);
  double lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

void CheckInstance(const EmissionMatrix& em, const MetaSequence& a,
                   int min_seg_frames) {
  if (min_seg_frames < 1) throw ValueError("min_seg_frames must be >= 1");
  if (a.ids.empty()) throw ValueError("meta sequence is empty");
  for (int id : a.ids) {
    if (id < 0 || id >= em.labels()) {
      throw ValueError("meta id " + std::to_string(id) +
                       " out of range for emission matrix with " +
                       std::to_string(em.labels()) + " labels");
    }
  }
  int n = static_cast<int>(a.ids.size());
  int64_t need = static_cast<int64_t>(n) * min_seg_frames;
  if (em.frames() < need) {
    throw InfeasibleError("cannot place " + std::to_string(n) +
                          " segments of at least " +
                          std::to_string(min_seg_frames) + " frame(s) in " +
                          std::to_string(em.frames()) + " frames");
  }
}

}  // namespace

// Both DPs run over a left-to-right machine with min_seg_frames sub-states
// per element. Sub-state j of element i emits the element's label; only the
// last sub-state has a self-loop, so a segment spans at least min_seg_frames
// frames and paths are in bijection with feasible segmentations.
double ForwardLogProb(const EmissionMatrix& em, const MetaSequence& a,
                      int min_seg_frames) {
  CheckInstance(em, a, min_seg_frames);
  const int T = em.frames();
  const int n = static_cast<int>(a.ids.size());
  const int m = min_seg_frames;
  const int S = n * m;

  std::vector<double> prev(S, kNegInf);
  std::vector<double> cur(S, kNegInf);
  prev[0] = em.LogProb(0, a.ids[0]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double from_self = (s % m == m - 1) ? prev[s] : kNegInf;
      double from_prev = (s > 0) ? prev[s - 1] : kNegInf;
      double in = LogAdd(from_self, from_prev);
      cur[s] = (in == kNegInf) ? kNegInf : em.LogProb(t, a.ids[s / m]) + in;
    }
    prev.swap(cur);
  }
  return prev[S - 1];
}

Segmentation ViterbiSegment(const EmissionMatrix& em, const MetaSequence& a,
                            int min_seg_frames) {
  CheckInstance(em, a, min_seg_frames);
  const int T = em.frames();
  const int n = static_cast<int>(a.ids.size());
  const int m = min_seg_frames;
  const int S = n * m;

  std::vector<double> prev(S, kNegInf);
  std::vector<double> cur(S, kNegInf);
  // came_from_prev[t*S + s]: the best path in state s at frame t arrived by
  // the transition edge from s-1, not the self-loop. Ties go to the
  // transition, which pushes every segment start as late as possible.
  std::vector<uint8_t> came_from_prev(static_cast<size_t>(T) * S, 0);
  prev[0] = em.LogProb(0, a.ids[0]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double from_self = (s % m == m - 1) ? prev[s] : kNegInf;
      double from_prev = (s > 0) ? prev[s - 1] : kNegInf;
      bool take_prev = (s > 0) && from_prev >= from_self;
      double in = take_prev ? from_prev : from_self;
      came_from_prev[static_cast<size_t>(t) * S + s] = take_prev ? 1 : 0;
      cur[s] = (in == kNegInf) ? kNegInf : em.LogProb(t, a.ids[s / m]) + in;
    }
    prev.swap(cur);
  }

  // entry[s] = frame at which the path enters sub-state s.
  std::vector<int> entry(S, 0);
  int s = S - 1;
  for (int t = T - 1; t > 0; --t) {
    if (s > 0 && came_from_prev[static_cast<size_t>(t) * S + s]) {
      entry[s] = t;
      --s;
    }
  }

  Segmentation seg;
  seg.boundaries.resize(n + 1);
  seg.boundaries[0] = 0;
  for (int i = 1; i < n; ++i) seg.boundaries[i] = entry[i * m];
  seg.boundaries[n] = T;

  seg.segment_scores.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = seg.boundaries[i]; t < seg.boundaries[i + 1]; ++t) {
      acc += em.LogProb(t, a.ids[i]);
    }
    seg.segment_scores[i] = acc;
  }
  for (int i = 0; i < n; ++i) {
    for (int t = seg.boundaries[i]; t < seg.boundaries[i + 1]; ++t) {
      total += em.LogProb(t, a.ids[i]);
    }
  }
  seg.log_score = total;
  return seg;
}

uint64_t CountSegmentations(int frames, int segments, int min_seg_frames) {
  if (segments < 1 || min_seg_frames < 1) return 0;
  int64_t slack =
      static_cast<int64_t>(frames) - static_cast<int64_t>(segments) * min_seg_frames;
  if (slack < 0) return 0;
  // C(slack + segments - 1, segments - 1)
  uint64_t top = static_cast<uint64_t>(slack) + segments - 1;
  uint64_t k = static_cast<uint64_t>(segments) - 1;
  if (k > top - k) k = top - k;
  unsigned __int128 result = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    result = result * (top - k + i) / i;
    if (result > kCountSaturation) return kCountSaturation;
  }
  return static_cast<uint64_t>(result);
}

double BruteForceLogProb(const EmissionMatrix& em, const MetaSequence& a,
                         int min_seg_frames) {
  CheckInstance(em, a, min_seg_frames);
  const int T = em.frames();
  const int n = static_cast<int>(a.ids.size());
  const int m = min_seg_frames;
  uint64_t count = CountSegmentations(T, n, m);
  if (count > kBruteForceGuard) {
    throw ValueError("refusing exhaustive enumeration of " +
                     std::to_string(count) + " segmentations (limit " +
                     std::to_string(kBruteForceGuard) + ")");
  }

  std::vector<double> path_scores;
  path_scores.reserve(count);
  std::vector<int> bounds(n + 1);
  bounds[0] = 0;
  bounds[n] = T;

  // Enumerates interior boundaries left to right; each path score is the
  // plain left-to-right sum, same fold order as the DPs use.
  auto enumerate = [&](auto&& self, int i, int start, double acc) -> void {
    if (i == n - 1) {
      for (int t = start; t < T; ++t) acc += em.LogProb(t, a.ids[i]);
      path_scores.push_back(acc);
      return;
    }
    double run = acc;
    for (int end = start + m; end <= T - (n - 1 - i) * m; ++end) {
      for (int t = (end == start + m) ? start : end - 1; t < end; ++t) {
        run += em.LogProb(t, a.ids[i]);
      }
      self(self, i + 1, end, run);
    }
  };
  enumerate(enumerate, 0, 0, 0.0);

  double max = kNegInf;
  for (double v : path_scores) max = std::max(max, v);
  if (max == kNegInf) return kNegInf;
  if (path_scores.size() == 1) return path_scores[0];
  double sum = 0.0;
  for (double v : path_scores) sum += std::exp(v - max);
  return max + std::log(sum);
}

double ScoreSegmentation(const EmissionMatrix& em, const MetaSequence& a,
                         const std::vector<int>& boundaries) {
  if (boundaries.size() != a.ids.size() + 1) {
    throw ValueError("boundary count does not match meta sequence length");
  }
  if (boundaries.front() != 0 || boundaries.back() != em.frames()) {
    throw ValueError("boundaries must start at 0 and end at the frame count");
  }
  double total = 0.0;
  for (size_t i = 0; i + 1 < boundaries.size(); ++i) {
    if (boundaries[i] >= boundaries[i + 1]) {
      throw ValueError("boundaries must be strictly increasing");
    }
    for (int t = boundaries[i]; t < boundaries[i + 1]; ++t) {
      total += em.LogProb(t, a.ids[i]);
    }
  }
  return total;
}

std::vector<SampleRange> SegmentationToSamples(const Segmentation& seg,
                                               int frame_hop,
                                               int64_t sample_count) {
  std::vector<SampleRange> ranges;
  ranges.reserve(seg.num_segments());
  for (int i = 0; i < seg.num_segments(); ++i) {
    int64_t start = std::min<int64_t>(
        static_cast<int64_t>(seg.boundaries[i]) * frame_hop, sample_count);
    int64_t end = std::min<int64_t>(
        static_cast<int64_t>(seg.boundaries[i + 1]) * frame_hop, sample_count);
    ranges.push_back({start, end});
  }
  return ranges;
}

}  // namespace mac
