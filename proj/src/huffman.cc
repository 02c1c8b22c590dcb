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

#include "jpegfp/huffman.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace jpegfp {

namespace {

constexpr uint8_t kDcValues[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

constexpr uint8_t kAcLuminanceValues[] = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
    0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08,
    0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
    0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45,
    0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75,
    0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3,
    0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6,
    0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9,
    0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
    0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4,
    0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa};

constexpr uint8_t kAcChrominanceValues[] = {
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41,
    0x51, 0x07, 0x61, 0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
    0xa1, 0xb1, 0xc1, 0x09, 0x23, 0x33, 0x52, 0xf0, 0x15, 0x62, 0x72, 0xd1,
    0x0a, 0x16, 0x24, 0x34, 0xe1, 0x25, 0xf1, 0x17, 0x18, 0x19, 0x1a, 0x26,
    0x27, 0x28, 0x29, 0x2a, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44,
    0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
    0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74,
    0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
    0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a,
    0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4,
    0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7,
    0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda,
    0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf2, 0xf3, 0xf4,
    0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa};

}  // namespace

CoefficientSymbol CoefficientSymbol::FromByte(uint8_t symbol,
                                              TableClass table_class) {
  if (table_class == TableClass::kDc) return {0, symbol};
  return {symbol >> 4, symbol & 0x0f};
}

HuffmanTable HuffmanTable::Build(
    TableClass table_class, int table_id,
    std::span<const uint8_t, kMaxCodeLength> counts,
    std::span<const uint8_t> symbols) {
  const int total = std::accumulate(counts.begin(), counts.end(), 0);
  if (total == 0) {
    throw Error(ErrorCode::kEmptyTable,
                "Huffman table " + std::to_string(table_id) + " has no codes");
  }
  if (total > 256 || static_cast<size_t>(total) != symbols.size()) {
    throw Error(ErrorCode::kMalformedSegment,
                "Huffman table declares " + std::to_string(total) +
                    " codes but carries " + std::to_string(symbols.size()) +
                    " symbols");
  }

  HuffmanTable table;
  table.class_ = table_class;
  table.id_ = table_id;
  std::copy(counts.begin(), counts.end(), table.counts_.begin());
  table.symbols_.assign(symbols.begin(), symbols.end());
  table.max_code_.fill(-1);

  int32_t code = 0;
  int index = 0;
  for (int len = 1; len <= kMaxCodeLength; ++len) {
    const int n = counts[len - 1];
    if (n > 0) {
      table.min_code_[len] = code;
      table.first_index_[len] = index;
      code += n;
      index += n;
      if (code > (int32_t{1} << len)) {
        throw Error(ErrorCode::kOverfullTable,
                    std::to_string(n) + " codes of length " +
                        std::to_string(len) + " do not fit");
      }
      table.max_code_[len] = code - 1;
      table.max_length_ = len;
    }
    code <<= 1;
  }
  return table;
}

std::optional<uint8_t> HuffmanTable::Lookup(const BitString& code) const {
  const int len = code.length;
  if (len < 1 || len > kMaxCodeLength || max_code_[len] < 0) {
    return std::nullopt;
  }
  const auto value = static_cast<int32_t>(code.value);
  if (value < min_code_[len] || value > max_code_[len]) return std::nullopt;
  return symbols_[first_index_[len] + (value - min_code_[len])];
}

std::vector<HuffmanTable::Entry> HuffmanTable::Entries() const {
  std::vector<Entry> out;
  out.reserve(symbols_.size());
  for (int len = 1; len <= kMaxCodeLength; ++len) {
    if (max_code_[len] < 0) continue;
    for (int32_t c = min_code_[len]; c <= max_code_[len]; ++c) {
      out.push_back({BitString{static_cast<uint32_t>(c), len},
                     symbols_[first_index_[len] + (c - min_code_[len])]});
    }
  }
  return out;
}

int AdditionalBitsToValue(int category, const BitString& bits) {
  if (bits.length != category) {
    throw Error(ErrorCode::kLengthMismatch,
                "category " + std::to_string(category) + " needs " +
                    std::to_string(category) + " bits, got " +
                    std::to_string(bits.length));
  }
  if (category == 0) return 0;
  const int raw = static_cast<int>(bits.value);
  if (bits.Bit(0) == 1) return raw;
  return raw - ((1 << category) - 1);
}

const StandardTableSpec& StandardDcLuminance() {
  static const StandardTableSpec spec{
      {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0}, kDcValues};
  return spec;
}

const StandardTableSpec& StandardDcChrominance() {
  static const StandardTableSpec spec{
      {0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, kDcValues};
  return spec;
}

const StandardTableSpec& StandardAcLuminance() {
  static const StandardTableSpec spec{
      {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d}, kAcLuminanceValues};
  return spec;
}

const StandardTableSpec& StandardAcChrominance() {
  static const StandardTableSpec spec{
      {0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77},
      kAcChrominanceValues};
  return spec;
}

}  // namespace jpegfp
