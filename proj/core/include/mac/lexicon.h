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

#ifndef MAC_LEXICON_H_
#define MAC_LEXICON_H_

#include <map>
#include <string>
#include <vector>

namespace mac {

// The set of basic pronunciation modeling units of a language. Ids are
// assigned in file order, 0-based and contiguous.
//
// File format: UTF-8, one label per line, '#' comment lines and blank lines
// ignored. Labels must be unique, non-empty and whitespace-free.
class MetaAudioSet {
 public:
  static MetaAudioSet Parse(const std::string& text);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int id) const;
  // Returns -1 when the label is unknown.
  int id(const std::string& label) const;
  bool contains(const std::string& label) const { return id(label) >= 0; }

  bool operator==(const MetaAudioSet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
};

// The pronunciation of one transcript: an ordered list of meta-audio ids.
struct MetaSequence {
  std::vector<int> ids;

  int size() const { return static_cast<int>(ids.size()); }
  bool operator==(const MetaSequence& other) const { return ids == other.ids; }
};

// alias -> canonical label map applied to raw lexicon labels before id
// resolution. Lets one lexicon serve several meta-audio granularities, e.g.
// folding tone variants onto a single unit.
//
// File format: UTF-8 TSV, "alias<TAB>canonical" per line, '#' comments.
// Canonical labels must exist in the meta-audio set and aliases must not
// chain (a canonical label is never itself an alias).
class MergeRules {
 public:
  static MergeRules Parse(const std::string& text, const MetaAudioSet& set);
  static MergeRules None() { return MergeRules(); }

  // Canonical form of a raw label; labels without a rule pass through.
  const std::string& Apply(const std::string& label) const;
  int size() const { return static_cast<int>(rules_.size()); }

 private:
  std::map<std::string, std::string> rules_;
};

enum class Tokenization { kChar, kSpace };
enum class OovPolicy { kError, kSkip };

// Out-of-vocabulary occurrences gathered while mapping transcripts.
struct OovReport {
  std::map<std::string, int64_t> counts;
  int64_t total_graphemes = 0;

  int64_t oov_total() const;
  // Fraction of grapheme occurrences with a pronunciation; 1.0 when empty.
  double mappable_fraction() const;
};

// The mapping from transcription text to meta-audio sequences. Holds, per
// grapheme, the ordered list of alternative pronunciations from the lexicon
// file; mapping uses the first one, so synthesis stays reproducible.
//
// File format: UTF-8 TSV. Optional leading header line "#tokenize=char" or
// "#tokenize=space" selects how transcripts split into graphemes (default
// char, i.e. one Unicode code point per grapheme with whitespace dropped).
// Other '#' lines are comments. Entries are "grapheme<TAB>label[ label...]";
// a repeated grapheme appends an alternative pronunciation.
class Lexicon {
 public:
  static Lexicon Parse(const std::string& text, const MetaAudioSet& set,
                       const MergeRules& rules);

  Tokenization tokenization() const { return tokenization_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool contains(const std::string& grapheme) const;
  // Alternatives in file order; throws ValueError for unknown graphemes.
  const std::vector<MetaSequence>& Pronunciations(const std::string& grapheme) const;

  std::vector<std::string> TokenizeTranscript(const std::string& text) const;

  // Concatenation of each grapheme's first pronunciation. Under kSkip, OOV
  // graphemes are dropped and counted in *oov (when given); an empty result
  // is an error either way.
  MetaSequence MapTranscript(const std::string& text, OovPolicy policy,
                             OovReport* oov = nullptr) const;

  OovReport Coverage(const std::vector<std::string>& texts) const;

  // Emits the file format; reparsing against the same set (no merge rules,
  // they were already applied) reproduces this lexicon exactly.
  std::string Serialize(const MetaAudioSet& set) const;

  bool operator==(const Lexicon& other) const {
    return tokenization_ == other.tokenization_ && entries_ == other.entries_;
  }

 private:
  Tokenization tokenization_ = Tokenization::kChar;
  std::map<std::string, std::vector<MetaSequence>> entries_;
};

// Splits UTF-8 text into code points, dropping whitespace.
std::vector<std::string> SplitUtf8Chars(const std::string& text);

}  // namespace mac

#endif  // MAC_LEXICON_H_
