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

#ifndef MAC_UTIL_H_
#define MAC_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mac {

std::string Trim(std::string_view s);

// Splits on a single delimiter character; keep_empty controls whether empty
// fields are preserved (TSV parsing wants them, token splitting does not).
std::vector<std::string> Split(std::string_view s, char delim, bool keep_empty);

// Splits into lines, accepting both LF and CRLF endings.
std::vector<std::string> SplitLines(std::string_view text);

// Shortest decimal form that parses back to the identical double
// (std::to_chars), so text round-trips are exact and platform independent.
std::string FormatDouble(double value);

// Strict full-string conversions; throw ParseError on any trailing garbage.
double ParseDouble(const std::string& s);
int64_t ParseInt64(const std::string& s);

std::string ReadTextFile(const std::filesystem::path& path);
std::vector<uint8_t> ReadBinaryFile(const std::filesystem::path& path);

// Writes to "<path>.tmp" then renames, so interrupted runs never leave a
// truncated file at the final path.
void AtomicWriteFile(const std::filesystem::path& path, std::string_view data);

// Worker thread count: min(hardware, MAC_FORGE_THREADS, limit), at least 1.
// limit <= 0 means unlimited.
int EffectiveThreads(int limit = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Exceptions from
// workers are rethrown on the calling thread (first one wins).
void ParallelFor(int64_t count, int threads, const std::function<void(int64_t)>& fn);

}  // namespace mac

#endif  // MAC_UTIL_H_
