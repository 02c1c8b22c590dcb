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

#ifndef JPEGFP_HUFFMAN_H_
#define JPEGFP_HUFFMAN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jpegfp/bit_string.h"
#include "jpegfp/error.h"

namespace jpegfp {

enum class TableClass : uint8_t { kDc = 0, kAc = 1 };

// (run, category) pair carried by one Huffman symbol. The category is also
// the number of additional bits that follow the code.
struct CoefficientSymbol {
  int run = 0;
  int category = 0;

  // DC symbols are the bare category; AC symbols pack run in the high nibble.
  static CoefficientSymbol FromByte(uint8_t symbol, TableClass table_class);

  bool IsEndOfBlock() const { return run == 0 && category == 0; }
  bool IsZeroRun() const { return run == 15 && category == 0; }

  friend bool operator==(const CoefficientSymbol&,
                         const CoefficientSymbol&) = default;
};

// Canonical Huffman decode table rebuilt from the BITS/HUFFVAL pair stored in
// a DHT segment.
class HuffmanTable {
 public:
  struct Entry {
    BitString code;
    uint8_t symbol;
  };

  static constexpr int kMaxCodeLength = 16;

  // Throws kEmptyTable if no symbols are defined, kOverfullTable if more codes
  // are requested at some length than the canonical assignment can supply, and
  // kMalformedSegment if the symbol count disagrees with `counts`.
  static HuffmanTable Build(TableClass table_class, int table_id,
                            std::span<const uint8_t, kMaxCodeLength> counts,
                            std::span<const uint8_t> symbols);

  TableClass table_class() const { return class_; }
  int table_id() const { return id_; }
  const std::array<uint8_t, kMaxCodeLength>& counts() const { return counts_; }
  const std::vector<uint8_t>& symbols() const { return symbols_; }
  int max_length() const { return max_length_; }

  // Symbol assigned to exactly this code, if any.
  std::optional<uint8_t> Lookup(const BitString& code) const;

  // Every (code, symbol) pair, in canonical order.
  std::vector<Entry> Entries() const;

 private:
  HuffmanTable() = default;

  TableClass class_ = TableClass::kDc;
  int id_ = 0;
  std::array<uint8_t, kMaxCodeLength> counts_{};
  std::vector<uint8_t> symbols_;
  int max_length_ = 0;
  // Indexed by code length 1..16; -1 in max_code_ when no code has that length.
  std::array<int32_t, kMaxCodeLength + 1> min_code_{};
  std::array<int32_t, kMaxCodeLength + 1> max_code_{};
  std::array<int32_t, kMaxCodeLength + 1> first_index_{};
};

struct DecodedSymbol {
  CoefficientSymbol symbol;
  BitString code;
};

// Reads one Huffman code from `cursor` (anything with `int ReadBit()` and
// `size_t ByteOffset() const`). Throws kInvalidCode once the bits read exceed
// the table's longest code without a match.
template <typename Cursor>
DecodedSymbol DecodeSymbol(const HuffmanTable& table, Cursor& cursor) {
  const size_t start = cursor.ByteOffset();
  BitString code;
  for (int len = 1; len <= table.max_length(); ++len) {
    code.Append(cursor.ReadBit());
    if (const auto symbol = table.Lookup(code)) {
      return {CoefficientSymbol::FromByte(*symbol, table.table_class()), code};
    }
  }
  throw Error(ErrorCode::kInvalidCode,
              "bit pattern " + code.ToString() + " matches no Huffman code",
              start);
}

// JPEG EXTEND: a leading 1 means the bits are the magnitude itself, a leading
// 0 means value = bits - (2^category - 1).
int AdditionalBitsToValue(int category, const BitString& bits);

// The typical tables from ITU-T T.81 Annex K.3, as BITS and HUFFVAL arrays.
struct StandardTableSpec {
  std::array<uint8_t, HuffmanTable::kMaxCodeLength> counts;
  std::span<const uint8_t> symbols;
};
const StandardTableSpec& StandardDcLuminance();
const StandardTableSpec& StandardDcChrominance();
const StandardTableSpec& StandardAcLuminance();
const StandardTableSpec& StandardAcChrominance();

}  // namespace jpegfp

#endif  // JPEGFP_HUFFMAN_H_
