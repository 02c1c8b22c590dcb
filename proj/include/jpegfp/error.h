// Copyright 2026 The jpegfp Authors.
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

#ifndef JPEGFP_ERROR_H_
#define JPEGFP_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace jpegfp {

enum class ErrorCode {
  // Container structure.
  kMissingSoi,
  kUnexpectedEof,
  kUnsupportedFrame,
  kUnsupportedScan,
  kMalformedSegment,
  kMissingSof,
  kMissingHuffmanTable,
  // Huffman tables and entropy decoding.
  kOverfullTable,
  kEmptyTable,
  kInvalidCode,
  kUnexpectedEnd,
  kLengthMismatch,
  kTooManyCoefficients,
  kRestartMismatch,
  kTrailingData,
  // Cipher.
  kBadKeyLength,
  kKeystreamExhausted,
};

// Stable identifier such as "MissingSOI", used in CLI messages and JSON.
const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The offset,
// when present, is an absolute byte position in the input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<size_t> offset = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<size_t> offset() const { return offset_; }

 private:
  ErrorCode code_;
  std::optional<size_t> offset_;
};

}  // namespace jpegfp

#endif  // JPEGFP_ERROR_H_
