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

#include "jpegfp/bit_string.h"

#include <stdexcept>

namespace jpegfp {

BitString BitString::FromString(std::string_view bits) {
  if (bits.size() > 32) {
    throw std::invalid_argument("BitString holds at most 32 bits");
  }
  BitString out;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitString expects only '0' and '1'");
    }
    out.Append(c - '0');
  }
  return out;
}

std::string BitString::ToString() const {
  std::string out;
  out.reserve(length);
  for (int i = 0; i < length; ++i) out.push_back(Bit(i) ? '1' : '0');
  return out;
}

}  // namespace jpegfp
