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

#ifndef MAC_WAV_H_
#define MAC_WAV_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mac {

// Mono audio. Samples are 16-bit PCM values carried as reals so that energy
// scaling keeps full precision until a file is written. File I/O quantizes
// with round-to-nearest and clamps to the 16-bit range; waveforms whose
// samples are already integral round-trip bit-exactly.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// RIFF/WAVE, PCM, 16-bit, mono, little-endian. The writer always emits the
// canonical 44-byte header. The reader skips unknown chunks and uses only
// "fmt " and "data"; anything that is not 16-bit mono PCM is a FormatError.
Waveform ReadWav(std::istream& in);
Waveform ReadWav(const std::filesystem::path& path);
std::string EncodeWav(const Waveform& wave);
void WriteWav(const Waveform& wave, const std::filesystem::path& path);

}  // namespace mac

#endif  // MAC_WAV_H_
