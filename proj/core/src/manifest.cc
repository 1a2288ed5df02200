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

#include "mac/manifest.h"

#include "json.hpp"
#include "mac/digest.h"
#include "mac/error.h"
#include "mac/util.h"

namespace mac {

namespace {

using nlohmann::json;

std::string RequireString(const json& j, const char* key, int line) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ParseError(std::string("manifest record missing string field \"") + key + "\"",
                     line);
  }
  return j[key].get<std::string>();
}

}  // namespace

std::vector<ManifestRecord> ParseManifest(const std::string& text) {
  std::vector<ManifestRecord> records;
  std::vector<std::string> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw ParseError(std::string("manifest: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ParseError("manifest line is not a JSON object", line_no);
    ManifestRecord rec;
    rec.id = RequireString(j, "id", line_no);
    rec.audio = RequireString(j, "audio", line_no);
    rec.text = RequireString(j, "text", line_no);
    if (j.contains("source")) rec.source = RequireString(j, "source", line_no);
    if (rec.source != "real" && rec.source != "mac") {
      throw ParseError("manifest source must be \"real\" or \"mac\", got \"" +
                           rec.source + "\"",
                       line_no);
    }
    if (j.contains("provenance")) rec.provenance = RequireString(j, "provenance", line_no);
    if (rec.id.empty()) throw ParseError("manifest record has empty id", line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadTextFile(path));
}

std::string SerializeManifest(const std::vector<ManifestRecord>& records) {
  std::string out;
  for (const ManifestRecord& rec : records) {
    json j;
    j["audio"] = rec.audio;
    j["id"] = rec.id;
    if (!rec.provenance.empty()) j["provenance"] = rec.provenance;
    j["source"] = rec.source;
    j["text"] = rec.text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteManifest(const std::filesystem::path& path,
                   const std::vector<ManifestRecord>& records) {
  AtomicWriteFile(path, SerializeManifest(records));
}

std::string SerializeProvenance(const ProvenanceRecord& record) {
  json j;
  json clips = json::array();
  for (const ClipChoice& c : record.clips) {
    clips.push_back(json::array({c.meta_id, c.utt_id, c.ordinal}));
  }
  j["clips"] = std::move(clips);
  j["id"] = record.id;
  j["meta_ids"] = record.meta_ids;
  return j.dump();
}

std::string ProvenanceDigest(const ProvenanceRecord& record) {
  return DigestToHex(Sha256(SerializeProvenance(record)));
}

std::vector<ProvenanceRecord> ParseProvenance(const std::string& text) {
  std::vector<ProvenanceRecord> records;
  std::vector<std::string> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i) + 1;
    if (Trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw ParseError(std::string("provenance: ") + e.what(), line_no);
    }
    try {
      ProvenanceRecord rec;
      rec.id = j.at("id").get<std::string>();
      rec.meta_ids = j.at("meta_ids").get<std::vector<int>>();
      for (const json& c : j.at("clips")) {
        if (!c.is_array() || c.size() != 3) {
          throw ParseError("provenance clip entry is not [meta_id, utt_id, ordinal]",
                           line_no);
        }
        rec.clips.push_back(
            {c[0].get<int>(), c[1].get<std::string>(), c[2].get<int>()});
      }
      records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError(std::string("provenance: ") + e.what(), line_no);
    }
  }
  return records;
}

std::vector<ProvenanceRecord> ReadProvenance(const std::filesystem::path& path) {
  return ParseProvenance(ReadTextFile(path));
}

void WriteProvenance(const std::filesystem::path& path,
                     const std::vector<ProvenanceRecord>& records) {
  std::string out;
  for (const ProvenanceRecord& rec : records) {
    out += SerializeProvenance(rec);
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

}  // namespace mac
