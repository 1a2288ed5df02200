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

#include "mac/lexicon.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mac/error.h"
#include "mac/util.h"

namespace mac {

namespace {

bool HasWhitespace(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

int Utf8CharLength(unsigned char first) {
  if ((first & 0x80) == 0x00) return 1;
  if ((first & 0xe0) == 0xc0) return 2;
  if ((first & 0xf0) == 0xe0) return 3;
  if ((first & 0xf8) == 0xf0) return 4;
  return 1;  // invalid lead byte, treat as a single unit
}

bool IsAsciiSpace(const std::string& cp) {
  return cp.size() == 1 && std::isspace(static_cast<unsigned char>(cp[0])) != 0;
}

}  // namespace

std::vector<std::string> SplitUtf8Chars(const std::string& text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    int len = Utf8CharLength(static_cast<unsigned char>(text[i]));
    if (i + len > text.size()) len = 1;
    std::string cp = text.substr(i, len);
    if (!IsAsciiSpace(cp)) out.push_back(std::move(cp));
    i += len;
  }
  return out;
}

MetaAudioSet MetaAudioSet::Parse(const std::string& text) {
  MetaAudioSet set;
  std::vector<std::string> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    int lineno = static_cast<int>(i) + 1;
    std::string label = Trim(lines[i]);
    if (label.empty() || label[0] == '#') continue;
    if (HasWhitespace(label)) {
      throw ParseError("meta-audio label contains whitespace: \"" + label + "\"", lineno);
    }
    if (set.index_.count(label)) {
      throw ParseError("duplicate meta-audio label \"" + label + "\"", lineno);
    }
    set.index_[label] = static_cast<int>(set.labels_.size());
    set.labels_.push_back(label);
  }
  if (set.labels_.empty()) throw ParseError("meta-audio set is empty");
  return set;
}

const std::string& MetaAudioSet::label(int id) const {
  if (id < 0 || id >= size()) {
    throw ValueError("meta-audio id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(size()) + ")");
  }
  return labels_[static_cast<size_t>(id)];
}

int MetaAudioSet::id(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

MergeRules MergeRules::Parse(const std::string& text, const MetaAudioSet& set) {
  MergeRules rules;
  std::vector<std::string> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    int lineno = static_cast<int>(i) + 1;
    const std::string& raw = lines[i];
    if (Trim(raw).empty() || raw[0] == '#') continue;
    std::vector<std::string> fields = Split(raw, '\t', /*keep_empty=*/true);
    if (fields.size() != 2) {
      throw ParseError("merge rule needs exactly \"alias<TAB>canonical\"", lineno);
    }
    std::string alias = Trim(fields[0]);
    std::string canonical = Trim(fields[1]);
    if (alias.empty() || canonical.empty()) {
      throw ParseError("empty alias or canonical label", lineno);
    }
    if (!set.contains(canonical)) {
      throw ParseError("canonical label \"" + canonical + "\" not in meta-audio set", lineno);
    }
    if (rules.rules_.count(alias)) {
      throw ParseError("duplicate alias \"" + alias + "\"", lineno);
    }
    rules.rules_[alias] = canonical;
  }
  // No chains: a rule target must never be an alias itself.
  for (const auto& [alias, canonical] : rules.rules_) {
    if (rules.rules_.count(canonical)) {
      throw ParseError("alias chain: \"" + alias + "\" -> \"" + canonical +
                       "\" which is itself an alias");
    }
  }
  return rules;
}

const std::string& MergeRules::Apply(const std::string& label) const {
  auto it = rules_.find(label);
  return it == rules_.end() ? label : it->second;
}

Lexicon Lexicon::Parse(const std::string& text, const MetaAudioSet& set,
                       const MergeRules& rules) {
  Lexicon lex;
  std::vector<std::string> lines = SplitLines(text);
  bool seen_entry = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    int lineno = static_cast<int>(i) + 1;
    const std::string& raw = lines[i];
    if (Trim(raw).empty()) continue;
    if (raw[0] == '#') {
      constexpr std::string_view kHeader = "#tokenize=";
      if (raw.rfind(kHeader, 0) == 0) {
        if (seen_entry) throw ParseError("tokenize header must precede entries", lineno);
        std::string mode = Trim(raw.substr(kHeader.size()));
        if (mode == "char") {
          lex.tokenization_ = Tokenization::kChar;
        } else if (mode == "space") {
          lex.tokenization_ = Tokenization::kSpace;
        } else {
          throw ParseError("unknown tokenize mode \"" + mode + "\"", lineno);
        }
      }
      continue;
    }
    size_t tab = raw.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("lexicon entry needs \"grapheme<TAB>labels\"", lineno);
    }
    std::string grapheme = raw.substr(0, tab);
    if (grapheme.empty()) throw ParseError("empty grapheme", lineno);
    std::vector<std::string> labels = Split(Trim(raw.substr(tab + 1)), ' ', /*keep_empty=*/false);
    if (labels.empty()) {
      throw ParseError("empty pronunciation for \"" + grapheme + "\"", lineno);
    }
    MetaSequence pron;
    pron.ids.reserve(labels.size());
    for (const std::string& label : labels) {
      const std::string& canonical = rules.Apply(label);
      int id = set.id(canonical);
      if (id < 0) {
        throw ParseError("unknown label \"" + label + "\" (after merging: \"" + canonical +
                         "\")", lineno);
      }
      pron.ids.push_back(id);
    }
    lex.entries_[grapheme].push_back(std::move(pron));
    seen_entry = true;
  }
  if (lex.entries_.empty()) throw ParseError("lexicon has no entries");
  return lex;
}

bool Lexicon::contains(const std::string& grapheme) const {
  return entries_.find(grapheme) != entries_.end();
}

const std::vector<MetaSequence>& Lexicon::Pronunciations(const std::string& grapheme) const {
  auto it = entries_.find(grapheme);
  if (it == entries_.end()) throw ValueError("grapheme \"" + grapheme + "\" not in lexicon");
  return it->second;
}

std::vector<std::string> Lexicon::TokenizeTranscript(const std::string& text) const {
  if (tokenization_ == Tokenization::kChar) return SplitUtf8Chars(text);
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

MetaSequence Lexicon::MapTranscript(const std::string& text, OovPolicy policy,
                                    OovReport* oov) const {
  std::vector<std::string> graphemes = TokenizeTranscript(text);
  MetaSequence out;
  for (size_t pos = 0; pos < graphemes.size(); ++pos) {
    const std::string& g = graphemes[pos];
    if (oov) ++oov->total_graphemes;
    auto it = entries_.find(g);
    if (it == entries_.end()) {
      if (policy == OovPolicy::kError) {
        throw ValueError("OOV grapheme \"" + g + "\" at position " + std::to_string(pos + 1));
      }
      if (oov) ++oov->counts[g];
      continue;
    }
    const MetaSequence& first = it->second.front();
    out.ids.insert(out.ids.end(), first.ids.begin(), first.ids.end());
  }
  if (out.ids.empty()) {
    throw ValueError("transcript maps to an empty meta-audio sequence: \"" + text + "\"");
  }
  return out;
}

int64_t OovReport::oov_total() const {
  int64_t n = 0;
  for (const auto& [g, count] : counts) n += count;
  return n;
}

double OovReport::mappable_fraction() const {
  if (total_graphemes == 0) return 1.0;
  return static_cast<double>(total_graphemes - oov_total()) /
         static_cast<double>(total_graphemes);
}

OovReport Lexicon::Coverage(const std::vector<std::string>& texts) const {
  OovReport report;
  for (const std::string& text : texts) {
    for (const std::string& g : TokenizeTranscript(text)) {
      ++report.total_graphemes;
      if (!contains(g)) ++report.counts[g];
    }
  }
  return report;
}

std::string Lexicon::Serialize(const MetaAudioSet& set) const {
  std::string out = "#tokenize=";
  out += tokenization_ == Tokenization::kChar ? "char" : "space";
  out += '\n';
  for (const auto& [grapheme, prons] : entries_) {
    for (const MetaSequence& pron : prons) {
      out += grapheme;
      out += '\t';
      for (size_t i = 0; i < pron.ids.size(); ++i) {
        if (i > 0) out += ' ';
        out += set.label(pron.ids[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace mac
