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

#ifndef JPEGFP_BIT_READER_H_
#define JPEGFP_BIT_READER_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "jpegfp/error.h"

namespace jpegfp {

// Reads bits MSB-first from a plain byte buffer. No marker or stuffing
// awareness; the entropy scanner has its own cursor for that.
class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> bytes, size_t bit_limit = ~size_t{0})
      : bytes_(bytes), limit_(bit_limit < bytes.size() * 8 ? bit_limit : bytes.size() * 8) {}

  int ReadBit() {
    if (pos_ >= limit_) {
      throw Error(ErrorCode::kUnexpectedEnd, "bit reader exhausted", ByteOffset());
    }
    const int bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return bit;
  }

  size_t ByteOffset() const { return pos_ >> 3; }
  size_t bit_position() const { return pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t limit_;
  size_t pos_ = 0;
};

}  // namespace jpegfp

#endif  // JPEGFP_BIT_READER_H_
