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

#include <string>

#include "doctest.h"
#include "mac/digest.h"
#include "mac/error.h"
#include "support/test_util.h"

using mac::ClipChoice;
using mac::ManifestRecord;
using mac::ParseManifest;
using mac::ProvenanceDigest;
using mac::ProvenanceRecord;
using mac::SerializeManifest;
using mac::SerializeProvenance;

TEST_SUITE("manifest") {

TEST_CASE("serialization is canonical: sorted keys, one line per record") {
  ManifestRecord real;
  real.id = "utt1";
  real.audio = "wav/utt1.wav";
  real.text = "hello";
  CHECK(SerializeManifest({real}) ==
        "{\"audio\":\"wav/utt1.wav\",\"id\":\"utt1\",\"source\":\"real\","
        "\"text\":\"hello\"}\n");

  ManifestRecord synth;
  synth.id = "mac_000001";
  synth.audio = "wav/mac_000001.wav";
  synth.text = "hi";
  synth.source = "mac";
  synth.provenance = "abc123";
  CHECK(SerializeManifest({synth}) ==
        "{\"audio\":\"wav/mac_000001.wav\",\"id\":\"mac_000001\","
        "\"provenance\":\"abc123\",\"source\":\"mac\",\"text\":\"hi\"}\n");
}

TEST_CASE("parse inverts serialize") {
  ManifestRecord a;
  a.id = "x";
  a.audio = "wav/x.wav";
  a.text = "some text with \"quotes\" and \\ backslashes";
  ManifestRecord b;
  b.id = "y";
  b.audio = "wav/y.wav";
  b.text = "\xe8\xa1\x8c\xe8\xa1\x97";  // CJK survives the round trip
  b.source = "mac";
  b.provenance = "beef";
  auto parsed = ParseManifest(SerializeManifest({a, b}));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0] == a);
  CHECK(parsed[1] == b);
}

TEST_CASE("blank lines are skipped, errors carry the line number") {
  auto records = ParseManifest(
      "\n{\"audio\":\"a.wav\",\"id\":\"u\",\"source\":\"real\",\"text\":\"t\"}\n\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "u");

  try {
    ParseManifest(
        "{\"audio\":\"a.wav\",\"id\":\"u\",\"source\":\"real\",\"text\":\"t\"}\n"
        "\n"
        "{not json\n");
    FAIL("expected ParseError");
  } catch (const mac::ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("missing or malformed fields are parse errors") {
  CHECK_THROWS_AS(ParseManifest("{\"id\":\"u\",\"source\":\"real\",\"text\":\"t\"}\n"),
                  mac::ParseError);  // no audio
  CHECK_THROWS_AS(
      ParseManifest(
          "{\"audio\":\"a.wav\",\"id\":\"u\",\"source\":\"fake\",\"text\":\"t\"}\n"),
      mac::ParseError);  // unknown source
  CHECK_THROWS_AS(
      ParseManifest(
          "{\"audio\":\"a.wav\",\"id\":\"\",\"source\":\"real\",\"text\":\"t\"}\n"),
      mac::ParseError);  // empty id
  CHECK_THROWS_AS(
      ParseManifest(
          "{\"audio\":7,\"id\":\"u\",\"source\":\"real\",\"text\":\"t\"}\n"),
      mac::ParseError);  // audio not a string
  CHECK_THROWS_AS(ParseManifest("[1,2]\n"), mac::ParseError);  // not an object
}

TEST_CASE("file round trip") {
  mac::test::TempDir dir;
  ManifestRecord rec;
  rec.id = "u";
  rec.audio = "wav/u.wav";
  rec.text = "t";
  mac::WriteManifest(dir / "m.jsonl", {rec});
  auto readback = mac::ReadManifest(dir / "m.jsonl");
  REQUIRE(readback.size() == 1);
  CHECK(readback[0] == rec);
}

TEST_CASE("provenance serializes to a fixed single line") {
  ProvenanceRecord prov;
  prov.id = "mac_000000";
  prov.meta_ids = {0, 1};
  prov.clips = {{0, "u1", 2}, {1, "u2", 0}};
  CHECK(SerializeProvenance(prov) ==
        "{\"clips\":[[0,\"u1\",2],[1,\"u2\",0]],\"id\":\"mac_000000\","
        "\"meta_ids\":[0,1]}");
}

TEST_CASE("provenance digest is the sha256 of the serialized line") {
  ProvenanceRecord prov;
  prov.id = "x";
  prov.meta_ids = {3};
  prov.clips = {{3, "u", 1}};
  CHECK(ProvenanceDigest(prov) ==
        mac::DigestToHex(mac::Sha256(SerializeProvenance(prov))));
  CHECK(ProvenanceDigest(prov).size() == 64);

  // Any field change moves the digest.
  auto moved = prov;
  moved.clips[0].ordinal = 2;
  CHECK(ProvenanceDigest(moved) != ProvenanceDigest(prov));
}

TEST_CASE("provenance parses back including clip choices") {
  ProvenanceRecord prov;
  prov.id = "p";
  prov.meta_ids = {5, 2, 5};
  prov.clips = {{5, "a", 0}, {2, "b", 3}, {5, "a", 1}};

  mac::test::TempDir dir;
  mac::WriteProvenance(dir / "p.jsonl", {prov});
  auto readback = mac::ReadProvenance(dir / "p.jsonl");
  REQUIRE(readback.size() == 1);
  CHECK(readback[0] == prov);
  CHECK(readback[0].clips[1] == ClipChoice{2, "b", 3});
}

TEST_CASE("malformed provenance is a parse error with line") {
  try {
    mac::ParseProvenance("{\"clips\":[],\"id\":\"a\",\"meta_ids\":[]}\nnope\n");
    FAIL("expected ParseError");
  } catch (const mac::ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(mac::ParseProvenance("{\"clips\":[[1,\"u\"]],\"id\":\"a\","
                                       "\"meta_ids\":[1]}\n"),
                  mac::ParseError);  // clip triple too short
}

}  // TEST_SUITE
