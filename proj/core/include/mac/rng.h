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

#ifndef MAC_RNG_H_
#define MAC_RNG_H_

#include <cstdint>
#include <random>

namespace mac {

// Everything here is bit-reproducible across platforms: mt19937_64's raw
// output is fully specified by the standard, and the draw helpers below avoid
// std::uniform_*_distribution, whose results are implementation defined.

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Unbiased draw from [0, n) via rejection.
  uint64_t UniformIndex(uint64_t n) {
    if (n == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Master seed plus derived per-utterance streams, so synthesis can run
// data-parallel while staying deterministic for a fixed seed.
class SeededRng {
 public:
  explicit SeededRng(uint64_t master_seed) : master_seed_(master_seed) {}

  uint64_t master_seed() const { return master_seed_; }

  RngStream Stream(uint64_t ordinal) const {
    return RngStream(SplitMix64(master_seed_ ^ SplitMix64(ordinal)));
  }

 private:
  uint64_t master_seed_;
};

}  // namespace mac

#endif  // MAC_RNG_H_
