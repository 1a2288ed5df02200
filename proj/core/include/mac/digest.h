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

#ifndef MAC_DIGEST_H_
#define MAC_DIGEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mac {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest Sha256(const void* data, size_t size);
Sha256Digest Sha256(std::string_view data);
Sha256Digest Sha256File(const std::filesystem::path& path);

std::string DigestToHex(const Sha256Digest& digest);
// Throws ParseError unless hex is exactly 64 hex characters.
Sha256Digest DigestFromHex(std::string_view hex);

}  // namespace mac

#endif  // MAC_DIGEST_H_
