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

#include "jpegfp/error.h"

namespace jpegfp {

namespace {

std::string Describe(ErrorCode code, const std::string& message,
                     std::optional<size_t> offset) {
  std::string out = ErrorCodeName(code);
  out += ": ";
  out += message;
  if (offset.has_value()) {
    out += " (at byte offset " + std::to_string(*offset) + ")";
  }
  return out;
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingSoi: return "MissingSOI";
    case ErrorCode::kUnexpectedEof: return "UnexpectedEOF";
    case ErrorCode::kUnsupportedFrame: return "UnsupportedFrame";
    case ErrorCode::kUnsupportedScan: return "UnsupportedScan";
    case ErrorCode::kMalformedSegment: return "MalformedSegment";
    case ErrorCode::kMissingSof: return "MissingSOF";
    case ErrorCode::kMissingHuffmanTable: return "MissingHuffmanTable";
    case ErrorCode::kOverfullTable: return "OverfullTable";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kInvalidCode: return "InvalidCode";
    case ErrorCode::kUnexpectedEnd: return "UnexpectedEnd";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooManyCoefficients: return "TooManyCoefficients";
    case ErrorCode::kRestartMismatch: return "RestartMismatch";
    case ErrorCode::kTrailingData: return "TrailingData";
    case ErrorCode::kBadKeyLength: return "BadKeyLength";
    case ErrorCode::kKeystreamExhausted: return "KeystreamExhausted";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<size_t> offset)
    : std::runtime_error(Describe(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace jpegfp
