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

#include "mac/emission.h"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "mac/digest.h"
#include "mac/error.h"
#include "support/test_util.h"

using mac::EmissionMatrix;

namespace {

EmissionMatrix MakeSmall(const mac::Sha256Digest& hash) {
  std::vector<float> logp = {-0.1f, -2.3f, -1.0f, -0.5f, -3.0f, -0.7f};
  return EmissionMatrix(3, 2, 160, 16000, std::move(logp), hash);
}

}  // namespace

TEST_SUITE("emission") {

TEST_CASE("encode then decode reproduces everything") {
  auto hash = mac::Sha256("some meta set");
  auto em = MakeSmall(hash);
  auto decoded = EmissionMatrix::Decode(em.Encode());
  CHECK(decoded.frames() == 3);
  CHECK(decoded.labels() == 2);
  CHECK(decoded.frame_hop() == 160);
  CHECK(decoded.sample_rate() == 16000);
  CHECK(decoded.meta_hash() == hash);
  for (int t = 0; t < 3; ++t)
    for (int k = 0; k < 2; ++k)
      CHECK(decoded.LogProb(t, k) == em.LogProb(t, k));
}

TEST_CASE("header layout is fixed at 54 bytes") {
  auto em = MakeSmall(mac::Sha256Digest{});
  auto bytes = em.Encode();
  CHECK(bytes.size() == 54 + 6 * 4);
  CHECK(bytes.substr(0, 4) == "MACE");
}

TEST_CASE("save and load through a file") {
  mac::test::TempDir dir;
  auto hash = mac::Sha256("set");
  MakeSmall(hash).Save(dir / "x.mace");
  auto em = EmissionMatrix::Load(dir / "x.mace", hash);
  CHECK(em.frames() == 3);
  CHECK(em.LogProb(2, 1) == doctest::Approx(-0.7).epsilon(1e-6));
}

TEST_CASE("wrong magic is a format error") {
  auto bytes = MakeSmall(mac::Sha256Digest{}).Encode();
  bytes[0] = 'X';
  CHECK_THROWS_AS(EmissionMatrix::Decode(bytes), mac::FormatError);
}

TEST_CASE("unsupported version is a format error") {
  auto bytes = MakeSmall(mac::Sha256Digest{}).Encode();
  bytes[4] = 9;
  CHECK_THROWS_AS(EmissionMatrix::Decode(bytes), mac::FormatError);
}

TEST_CASE("truncated payload names both sizes") {
  auto bytes = MakeSmall(mac::Sha256Digest{}).Encode();
  try {
    EmissionMatrix::Decode(bytes.substr(0, bytes.size() - 3));
    FAIL("expected FormatError");
  } catch (const mac::FormatError& e) {
    std::string what = e.what();
    CHECK(what.find("truncated") != std::string::npos);
  }
  CHECK_THROWS_AS(EmissionMatrix::Decode(bytes.substr(0, 10)), mac::FormatError);
  CHECK_THROWS_AS(EmissionMatrix::Decode(""), mac::FormatError);
}

TEST_CASE("meta-set hash mismatch is its own error class") {
  auto em = MakeSmall(mac::Sha256("right set"));
  CHECK_THROWS_AS(EmissionMatrix::Decode(em.Encode(), mac::Sha256("wrong set")),
                  mac::HashMismatchError);
  CHECK_NOTHROW(EmissionMatrix::Decode(em.Encode(), mac::Sha256("right set")));
}

TEST_CASE("zero dimensions are rejected") {
  auto bytes = MakeSmall(mac::Sha256Digest{}).Encode();
  for (int i = 6; i < 10; ++i) bytes[i] = 0;  // frames := 0
  CHECK_THROWS_AS(EmissionMatrix::Decode(bytes), mac::FormatError);
}

TEST_CASE("positive entries are rejected unless renormalizing") {
  std::vector<float> logits = {1.0f, 2.0f};
  CHECK_THROWS_AS(
      EmissionMatrix(1, 2, 160, 16000, logits, mac::Sha256Digest{}),
      mac::FormatError);

  EmissionMatrix em(1, 2, 160, 16000, logits, mac::Sha256Digest{}, true);
  CHECK(em.normalized());
  double p0 = std::exp(em.LogProb(0, 0));
  double p1 = std::exp(em.LogProb(0, 1));
  CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p1 / p0 == doctest::Approx(std::exp(1.0)).epsilon(1e-5));
}

TEST_CASE("NaN entries are rejected") {
  std::vector<float> logp = {-1.0f, std::numeric_limits<float>::quiet_NaN()};
  CHECK_THROWS_AS(
      EmissionMatrix(1, 2, 160, 16000, logp, mac::Sha256Digest{}),
      mac::FormatError);
}

TEST_CASE("minus infinity entries survive the codec") {
  std::vector<float> logp = {-std::numeric_limits<float>::infinity(), -0.5f};
  EmissionMatrix em(1, 2, 160, 16000, logp, mac::Sha256Digest{});
  auto decoded = EmissionMatrix::Decode(em.Encode());
  CHECK(std::isinf(decoded.LogProb(0, 0)));
  CHECK(decoded.LogProb(0, 0) < 0);
}

TEST_CASE("shape must match the payload size") {
  CHECK_THROWS_AS(EmissionMatrix(2, 2, 160, 16000, {-1.0f, -1.0f},
                                 mac::Sha256Digest{}),
                  mac::ValueError);
  CHECK_THROWS_AS(EmissionMatrix(0, 2, 160, 16000, {}, mac::Sha256Digest{}),
                  mac::ValueError);
}

}  // TEST_SUITE
