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

#ifndef JPEGFP_BIT_STRING_H_
#define JPEGFP_BIT_STRING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace jpegfp {

// A short run of bits (at most 32), stored right-aligned in `value`. The
// first bit of the run is the most significant of the `length` low bits.
struct BitString {
  uint32_t value = 0;
  int length = 0;

  // Parses a string of '0' and '1' characters. Throws std::invalid_argument
  // on any other character or on more than 32 bits.
  static BitString FromString(std::string_view bits);

  std::string ToString() const;

  // Bit `i` counted from the start of the run.
  int Bit(int i) const { return (value >> (length - 1 - i)) & 1; }

  void Append(int bit) {
    value = (value << 1) | static_cast<uint32_t>(bit & 1);
    ++length;
  }

  friend bool operator==(const BitString&, const BitString&) = default;
};

}  // namespace jpegfp

#endif  // JPEGFP_BIT_STRING_H_
