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

#ifndef MAC_MANIFEST_H_
#define MAC_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

namespace mac {

// One audio-transcription pair. `audio` is a path relative to the manifest
// file's directory. `source` is "real" for recorded data and "mac" for
// synthesized data; synthesized records carry the hex digest of their
// provenance record, real ones leave it empty.
struct ManifestRecord {
  std::string id;
  std::string audio;
  std::string text;
  std::string source = "real";
  std::string provenance;

  bool operator==(const ManifestRecord&) const = default;
};

// One clip drawn from the database: candidate `ordinal` of meta-audio
// `meta_id`, originally cut from utterance `utt_id`.
struct ClipChoice {
  int meta_id = 0;
  std::string utt_id;
  int ordinal = 0;

  bool operator==(const ClipChoice&) const = default;
};

// Everything needed to re-derive a synthesized utterance: the meta-audio
// sequence its transcript mapped to and the exact clip chosen per element.
// The digest of its canonical serialization is what the manifest carries.
struct ProvenanceRecord {
  std::string id;
  std::vector<int> meta_ids;
  std::vector<ClipChoice> clips;

  bool operator==(const ProvenanceRecord&) const = default;
};

// Manifest files are UTF-8 JSON lines, one record per line, keys sorted.
// Parse errors carry the 1-based line number.
std::vector<ManifestRecord> ParseManifest(const std::string& text);
std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path);
std::string SerializeManifest(const std::vector<ManifestRecord>& records);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<ManifestRecord>& records);

// Canonical single-line JSON form; ProvenanceDigest is the hex SHA-256 of
// exactly this string.
std::string SerializeProvenance(const ProvenanceRecord& record);
std::string ProvenanceDigest(const ProvenanceRecord& record);

std::vector<ProvenanceRecord> ParseProvenance(const std::string& text);
std::vector<ProvenanceRecord> ReadProvenance(const std::filesystem::path& path);
void WriteProvenance(const std::filesystem::path& path,
                     const std::vector<ProvenanceRecord>& records);

}  // namespace mac

#endif  // MAC_MANIFEST_H_
