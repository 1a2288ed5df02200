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

#ifndef MAC_ERROR_H_
#define MAC_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace mac {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input: meta-audio set, lexicon, merge rules, index files,
// manifests. Carries the 1-based line number when one is known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Binary format violation: bad magic, unsupported version, truncated payload,
// out-of-domain values.
class FormatError : public Error {
 public:
  using Error::Error;
};

// An embedded meta-audio-set digest does not match the expected one.
class HashMismatchError : public Error {
 public:
  using Error::Error;
};

// No feasible segmentation exists (e.g. frames < segments * min_seg_frames).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Requested meta-audio ids have no clips in the database.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<int> missing_ids)
      : Error(what), missing_ids_(std::move(missing_ids)) {}

  const std::vector<int>& missing_ids() const { return missing_ids_; }

 private:
  std::vector<int> missing_ids_;
};

// Invalid argument or violated precondition.
class ValueError : public Error {
 public:
  using Error::Error;
};

}  // namespace mac

#endif  // MAC_ERROR_H_
