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

#ifndef JPEGFP_ENTROPY_SCANNER_H_
#define JPEGFP_ENTROPY_SCANNER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jpegfp/document.h"

namespace jpegfp {

enum class BitKind : uint8_t {
  kHuffman,     // part of a Huffman code
  kAdditional,  // amplitude bit following a code
  kStuffed,     // the 00 byte after a data FF
  kPad,         // 1-fill before a restart marker or at the end of the scan
  kRestart,     // RSTn marker byte
};

enum class CoeffClass : uint8_t { kDc, kAc };

struct BitLabel {
  BitKind kind = BitKind::kHuffman;
  CoeffClass coeff = CoeffClass::kDc;  // meaningful for kAdditional only
  uint8_t component = 0;               // frame component index, kAdditional only

  friend bool operator==(const BitLabel&, const BitLabel&) = default;
};

// Labels for every bit of one entropy span. Byte i of the span owns labels
// [8i, 8i+8), most significant bit first.
class BitLabelMap {
 public:
  BitLabelMap() = default;
  // Throws std::invalid_argument unless labels.size() == 8 * bytes.size().
  BitLabelMap(size_t span_offset, std::vector<uint8_t> bytes,
              std::vector<BitLabel> labels);

  size_t span_offset() const { return span_offset_; }
  size_t size() const { return bytes_.size(); }
  uint8_t value(size_t byte) const { return bytes_[byte]; }
  std::span<const BitLabel, 8> labels(size_t byte) const {
    return std::span<const BitLabel>(labels_).subspan(8 * byte).first<8>();
  }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  const std::vector<BitLabel>& all_labels() const { return labels_; }

  // e.g. "HHHHHAAA"; H huffman, A additional, S stuffed, P pad, R restart.
  std::string LabelString(size_t byte) const;

  // Same labels at the same positions; byte values are not compared.
  bool SameStructure(const BitLabelMap& other) const;

 private:
  size_t span_offset_ = 0;
  std::vector<uint8_t> bytes_;
  std::vector<BitLabel> labels_;
};

// One decoded (run, category) symbol, kept for diagnostics and structural
// comparisons. `value` is the coefficient amplitude (DC: the absolute DC
// after prediction, AC: the signed amplitude).
struct SymbolRecord {
  CoeffClass coeff = CoeffClass::kDc;
  uint8_t run = 0;
  uint8_t category = 0;
  int value = 0;

  friend bool operator==(const SymbolRecord&, const SymbolRecord&) = default;
};

struct BlockRecord {
  uint8_t component = 0;  // frame component index
  int block_x = 0;        // position in the component's block grid
  int block_y = 0;
  std::vector<SymbolRecord> symbols;
};

struct ScanTrace {
  std::vector<BlockRecord> blocks;
};

// Walks the span MCU by MCU and labels every bit. `span_offset` is the
// absolute file offset of span[0] and is used for error reporting. When
// `trace` is non-null every decoded symbol is appended to it.
BitLabelMap LabelSpan(std::span<const uint8_t> span, size_t span_offset,
                      const ScanInfo& scan, const FrameInfo& frame,
                      const HuffmanTableSet& tables,
                      ScanTrace* trace = nullptr);

enum class Target { kDc, kAc, kBoth };

enum class ExclusionReason {
  kMarkerOrPad,       // only restart-marker or fill bits
  kStuffedZero,       // the 00 after FF
  kAllHuffman,        // no additional bits at all
  kNoTargetBits,      // additional bits present, none of the targeted class
  kAllAdditional,     // all 8 bits are additional bits
  kFixedBitsAllOnes,  // every non-additional bit is 1
};

struct ByteClass {
  size_t offset = 0;  // relative to the span start
  uint8_t mask = 0;   // nonzero iff encryptable
  std::optional<ExclusionReason> reason;

  bool encryptable() const { return mask != 0; }

  friend bool operator==(const ByteClass&, const ByteClass&) = default;
};

// Verdict for a single byte given its labels and value.
ByteClass ClassifyByte(std::span<const BitLabel, 8> labels, uint8_t value,
                       Target target);

std::vector<ByteClass> ClassifyEntropyBytes(const BitLabelMap& map,
                                            Target target);

// A span together with its decoding context and label map.
struct LabeledSpan {
  EntropySpanContext context;
  BitLabelMap labels;
};

std::vector<LabeledSpan> LabelDocument(const BitstreamDocument& doc,
                                       std::vector<ScanTrace>* traces = nullptr);

const char* TargetName(Target target);
// Accepts "dc", "ac", "both" (case-insensitive).
std::optional<Target> ParseTarget(std::string_view name);
const char* ExclusionReasonName(ExclusionReason reason);

enum class DumpFormat { kText, kJson };

// One line describing a classified byte: offset, hex value, label string,
// verdict and reason.
std::string FormatByteClass(const BitLabelMap& map, const ByteClass& cls,
                            DumpFormat format);

}  // namespace jpegfp

#endif  // JPEGFP_ENTROPY_SCANNER_H_
