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

#include <string>

#include "doctest.h"
#include "mac/error.h"

using mac::Lexicon;
using mac::MergeRules;
using mac::MetaAudioSet;
using mac::MetaSequence;
using mac::OovPolicy;

namespace {

const char kSetText[] = "K\nAE\nT\n";
const char kLexText[] = "c\tK\na\tAE\nt\tT\n";

Lexicon ParseCat() {
  auto set = MetaAudioSet::Parse(kSetText);
  return Lexicon::Parse(kLexText, set, MergeRules::None());
}

}  // namespace

TEST_SUITE("lexicon") {

TEST_CASE("meta set ids follow file order") {
  auto set = MetaAudioSet::Parse(kSetText);
  CHECK(set.size() == 3);
  CHECK(set.labels() == std::vector<std::string>{"K", "AE", "T"});
  CHECK(set.id("K") == 0);
  CHECK(set.id("AE") == 1);
  CHECK(set.id("T") == 2);
  CHECK(set.id("Q") == -1);
  CHECK(set.label(1) == "AE");
}

TEST_CASE("meta set skips comments and blanks") {
  auto set = MetaAudioSet::Parse("# header\n\nA\n# mid\nB\n");
  CHECK(set.labels() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("duplicate label is a parse error carrying the line") {
  try {
    MetaAudioSet::Parse("K\n#c\nK\n");
    FAIL("expected ParseError");
  } catch (const mac::ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("K") != std::string::npos);
  }
}

TEST_CASE("empty meta set is rejected") {
  CHECK_THROWS_AS(MetaAudioSet::Parse(""), mac::ParseError);
  CHECK_THROWS_AS(MetaAudioSet::Parse("# only comments\n"), mac::ParseError);
}

TEST_CASE("label with embedded whitespace is rejected") {
  CHECK_THROWS_AS(MetaAudioSet::Parse("A B\n"), mac::ParseError);
}

TEST_CASE("lexicon resolves labels to ids") {
  auto lex = ParseCat();
  CHECK(lex.size() == 3);
  CHECK(lex.Pronunciations("c") == std::vector<MetaSequence>{{{0}}});
  CHECK(lex.Pronunciations("a") == std::vector<MetaSequence>{{{1}}});
  CHECK(lex.Pronunciations("t") == std::vector<MetaSequence>{{{2}}});
}

TEST_CASE("merge rules fold aliases onto one unit") {
  auto set = MetaAudioSet::Parse("haa\nsik\n");
  auto rules = MergeRules::Parse("haa4\thaa\nhaa6\thaa\n", set);
  CHECK(rules.Apply("haa4") == "haa");
  CHECK(rules.Apply("haa6") == "haa");
  CHECK(rules.Apply("sik") == "sik");

  auto lex = Lexicon::Parse("\xe8\xa1\x8c\thaa4\n", set, rules);
  auto seq = lex.MapTranscript("\xe8\xa1\x8c", OovPolicy::kError);
  CHECK(seq.ids == std::vector<int>{0});
}

TEST_CASE("merge rule chains are rejected") {
  auto set = MetaAudioSet::Parse("a\n");
  // b -> a is fine; c -> b would chain through an alias.
  CHECK_THROWS_AS(MergeRules::Parse("b\ta\nc\tb\n", set), mac::ParseError);
}

TEST_CASE("merge rule canonical label must exist") {
  auto set = MetaAudioSet::Parse("a\n");
  CHECK_THROWS_AS(MergeRules::Parse("x\tnope\n", set), mac::ParseError);
}

TEST_CASE("merge application is idempotent") {
  auto set = MetaAudioSet::Parse("haa\n");
  auto rules = MergeRules::Parse("haa4\thaa\n", set);
  CHECK(rules.Apply(rules.Apply("haa4")) == rules.Apply("haa4"));
  CHECK(rules.Apply(rules.Apply("haa")) == "haa");
}

TEST_CASE("unknown label in lexicon is a parse error with line") {
  auto set = MetaAudioSet::Parse(kSetText);
  try {
    Lexicon::Parse("c\tK\nx\tQQ\n", set, MergeRules::None());
    FAIL("expected ParseError");
  } catch (const mac::ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("QQ") != std::string::npos);
  }
}

TEST_CASE("empty pronunciation is rejected") {
  auto set = MetaAudioSet::Parse(kSetText);
  CHECK_THROWS_AS(Lexicon::Parse("c\t\n", set, MergeRules::None()),
                  mac::ParseError);
  CHECK_THROWS_AS(Lexicon::Parse("c\n", set, MergeRules::None()),
                  mac::ParseError);
}

TEST_CASE("repeated grapheme appends an alternative, first wins") {
  auto set = MetaAudioSet::Parse(kSetText);
  auto lex = Lexicon::Parse("c\tK\nc\tT\n", set, MergeRules::None());
  CHECK(lex.Pronunciations("c").size() == 2);
  auto seq = lex.MapTranscript("c", OovPolicy::kError);
  CHECK(seq.ids == std::vector<int>{0});
}

TEST_CASE("transcript maps to first pronunciations concatenated") {
  auto seq = ParseCat().MapTranscript("cat", OovPolicy::kError);
  CHECK(seq.ids == std::vector<int>{0, 1, 2});
}

TEST_CASE("skip policy drops OOV graphemes and reports them") {
  mac::OovReport oov;
  auto seq = ParseCat().MapTranscript("cxt", OovPolicy::kSkip, &oov);
  CHECK(seq.ids == std::vector<int>{0, 2});
  CHECK(oov.counts.at("x") == 1);
  CHECK(oov.oov_total() == 1);
}

TEST_CASE("error policy names the grapheme and its position") {
  try {
    ParseCat().MapTranscript("cxt", OovPolicy::kError);
    FAIL("expected ValueError");
  } catch (const mac::ValueError& e) {
    std::string what = e.what();
    CHECK(what.find("\"x\"") != std::string::npos);
    CHECK(what.find("2") != std::string::npos);
  }
}

TEST_CASE("fully OOV transcript is an error even under skip") {
  CHECK_THROWS_AS(ParseCat().MapTranscript("xyz", OovPolicy::kSkip),
                  mac::ValueError);
}

TEST_CASE("mapping factorizes over graphemes") {
  auto lex = ParseCat();
  auto whole = lex.MapTranscript("catcat", OovPolicy::kError);
  std::vector<int> parts;
  for (const auto& g : lex.TokenizeTranscript("catcat")) {
    auto seq = lex.MapTranscript(g, OovPolicy::kError);
    parts.insert(parts.end(), seq.ids.begin(), seq.ids.end());
  }
  CHECK(whole.ids == parts);
}

TEST_CASE("coverage over fully mappable texts") {
  auto report = ParseCat().Coverage({"cat", "cat"});
  CHECK(report.counts.empty());
  CHECK(report.mappable_fraction() == 1.0);
  CHECK(report.total_graphemes == 6);
}

TEST_CASE("coverage counts OOV occurrences") {
  auto report = ParseCat().Coverage({"cxt"});
  CHECK(report.counts.at("x") == 1);
  CHECK(report.mappable_fraction() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("coverage of no texts is vacuously full") {
  auto report = ParseCat().Coverage({});
  CHECK(report.counts.empty());
  CHECK(report.mappable_fraction() == 1.0);
}

TEST_CASE("char tokenization splits code points and drops whitespace") {
  auto lex = ParseCat();
  CHECK(lex.TokenizeTranscript("c a\tt") ==
        std::vector<std::string>{"c", "a", "t"});
  CHECK(mac::SplitUtf8Chars("\xe8\xa1\x8c\x61") ==
        std::vector<std::string>{"\xe8\xa1\x8c", "a"});
}

TEST_CASE("space tokenization splits on whitespace runs") {
  auto set = MetaAudioSet::Parse("K\nAE\nT\n");
  auto lex = Lexicon::Parse("#tokenize=space\ncat\tK AE T\n", set,
                            MergeRules::None());
  CHECK(lex.tokenization() == mac::Tokenization::kSpace);
  CHECK(lex.TokenizeTranscript("cat  cat") ==
        std::vector<std::string>{"cat", "cat"});
  auto seq = lex.MapTranscript("cat cat", OovPolicy::kError);
  CHECK(seq.ids == std::vector<int>{0, 1, 2, 0, 1, 2});
}

TEST_CASE("multi-label pronunciations keep label order") {
  auto set = MetaAudioSet::Parse(kSetText);
  auto lex = Lexicon::Parse("q\tT K AE\n", set, MergeRules::None());
  auto seq = lex.MapTranscript("q", OovPolicy::kError);
  CHECK(seq.ids == std::vector<int>{2, 0, 1});
}

TEST_CASE("serialize then reparse reproduces the lexicon") {
  auto set = MetaAudioSet::Parse(kSetText);
  auto lex = Lexicon::Parse("c\tK\nc\tT K\na\tAE\n", set, MergeRules::None());
  auto reparsed = Lexicon::Parse(lex.Serialize(set), set, MergeRules::None());
  CHECK(reparsed == lex);

  auto spaced = Lexicon::Parse("#tokenize=space\ncat\tK AE T\n", set,
                               MergeRules::None());
  CHECK(Lexicon::Parse(spaced.Serialize(set), set, MergeRules::None()) == spaced);
}

}  // TEST_SUITE
