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

#include "jpegfp/entropy_scanner.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "jpegfp/error.h"

namespace jpegfp {

namespace {

constexpr int kMaxDcCategory = 11;

// Bit cursor over entropy-coded bytes that labels each bit as it is read.
// Stuffed zero bytes are skipped transparently and labeled kStuffed.
class LabelingCursor {
 public:
  LabelingCursor(std::span<const uint8_t> bytes, size_t span_offset,
                 std::vector<BitLabel>* labels)
      : bytes_(bytes), span_offset_(span_offset), labels_(labels) {}

  void set_label(BitLabel label) { label_ = label; }

  int ReadBit() {
    if (bit_ == 0) EnterByte();
    const int bit = (bytes_[byte_] >> (7 - bit_)) & 1;
    (*labels_)[8 * byte_ + bit_] = label_;
    if (++bit_ == 8) LeaveByte();
    return bit;
  }

  BitString ReadBits(int count) {
    BitString out;
    for (int i = 0; i < count; ++i) out.Append(ReadBit());
    return out;
  }

  size_t ByteOffset() const { return span_offset_ + byte_; }

  // Labels the remaining bits of a partially consumed byte as padding.
  void AlignToByte() {
    if (bit_ == 0) return;
    set_label({BitKind::kPad});
    while (bit_ != 0) ReadBit();
  }

  // Consumes optional FF fill bytes and the RSTn marker expected next.
  void ExpectRestart(int expected) {
    while (byte_ + 1 < bytes_.size() && bytes_[byte_] == 0xFF &&
           bytes_[byte_ + 1] == 0xFF) {
      LabelWholeByte(byte_++, {BitKind::kPad});
    }
    const uint8_t want = static_cast<uint8_t>(marker::kRst0 + (expected & 7));
    if (byte_ + 1 >= bytes_.size() || bytes_[byte_] != 0xFF ||
        bytes_[byte_ + 1] != want) {
      throw Error(ErrorCode::kRestartMismatch,
                  "expected RST" + std::to_string(expected & 7) + " marker",
                  ByteOffset());
    }
    LabelWholeByte(byte_, {BitKind::kRestart});
    LabelWholeByte(byte_ + 1, {BitKind::kRestart});
    byte_ += 2;
  }

  // After the last MCU: only FF fill may remain before the next marker.
  void FinishSpan() {
    AlignToByte();
    while (byte_ < bytes_.size()) {
      if (bytes_[byte_] != 0xFF) {
        throw Error(ErrorCode::kTrailingData,
                    std::to_string(bytes_.size() - byte_) +
                        " bytes of entropy data after the last MCU",
                    ByteOffset());
      }
      LabelWholeByte(byte_++, {BitKind::kPad});
    }
  }

 private:
  void EnterByte() {
    if (byte_ >= bytes_.size()) {
      throw Error(ErrorCode::kUnexpectedEnd,
                  "entropy data exhausted inside an MCU", ByteOffset());
    }
    if (bytes_[byte_] == 0xFF &&
        (byte_ + 1 >= bytes_.size() || bytes_[byte_ + 1] != 0x00)) {
      throw Error(ErrorCode::kUnexpectedEnd, "marker reached inside an MCU",
                  ByteOffset());
    }
  }

  void LeaveByte() {
    bit_ = 0;
    if (bytes_[byte_] == 0xFF) {
      LabelWholeByte(byte_ + 1, {BitKind::kStuffed});
      byte_ += 2;
    } else {
      byte_ += 1;
    }
  }

  void LabelWholeByte(size_t byte, BitLabel label) {
    std::fill_n(labels_->begin() + 8 * byte, 8, label);
  }

  std::span<const uint8_t> bytes_;
  size_t span_offset_;
  std::vector<BitLabel>* labels_;
  BitLabel label_;
  size_t byte_ = 0;
  int bit_ = 0;
};

class SpanWalker {
 public:
  SpanWalker(LabelingCursor* cursor, const HuffmanTableSet& tables,
             ScanTrace* trace)
      : cursor_(cursor), tables_(tables), trace_(trace) {}

  void ResetPredictors() { predictors_.fill(0); }

  void DecodeBlock(const ScanComponent& sc, int block_x, int block_y) {
    const auto component = static_cast<uint8_t>(sc.frame_index);
    BlockRecord* record = nullptr;
    if (trace_ != nullptr) {
      trace_->blocks.push_back({component, block_x, block_y, {}});
      record = &trace_->blocks.back();
    }

    cursor_->set_label({BitKind::kHuffman});
    const DecodedSymbol dc = DecodeSymbol(*tables_.dc[sc.dc_table], *cursor_);
    const int dc_category = dc.symbol.category;
    if (dc_category > kMaxDcCategory) {
      throw Error(ErrorCode::kInvalidCode,
                  "DC category " + std::to_string(dc_category) + " exceeds 11",
                  cursor_->ByteOffset());
    }
    cursor_->set_label({BitKind::kAdditional, CoeffClass::kDc, component});
    const BitString dc_bits = cursor_->ReadBits(dc_category);
    predictors_[component] += AdditionalBitsToValue(dc_category, dc_bits);
    if (record != nullptr) {
      record->symbols.push_back({CoeffClass::kDc, 0,
                                 static_cast<uint8_t>(dc_category),
                                 predictors_[component]});
    }

    const HuffmanTable& ac_table = *tables_.ac[sc.ac_table];
    int k = 1;
    while (k < 64) {
      cursor_->set_label({BitKind::kHuffman});
      const CoefficientSymbol s = DecodeSymbol(ac_table, *cursor_).symbol;
      if (s.category == 0) {
        if (record != nullptr) {
          record->symbols.push_back(
              {CoeffClass::kAc, static_cast<uint8_t>(s.run), 0, 0});
        }
        if (!s.IsZeroRun()) break;  // EOB
        k += 16;
        if (k > 64) {
          throw Error(ErrorCode::kTooManyCoefficients,
                      "zero run past coefficient 63", cursor_->ByteOffset());
        }
        continue;
      }
      k += s.run;
      if (k > 63) {
        throw Error(ErrorCode::kTooManyCoefficients,
                    "run length past coefficient 63", cursor_->ByteOffset());
      }
      cursor_->set_label({BitKind::kAdditional, CoeffClass::kAc, component});
      const BitString bits = cursor_->ReadBits(s.category);
      if (record != nullptr) {
        record->symbols.push_back({CoeffClass::kAc,
                                   static_cast<uint8_t>(s.run),
                                   static_cast<uint8_t>(s.category),
                                   AdditionalBitsToValue(s.category, bits)});
      }
      ++k;
    }
  }

 private:
  LabelingCursor* cursor_;
  const HuffmanTableSet& tables_;
  ScanTrace* trace_;
  std::array<int, 4> predictors_{};
};

bool Matches(Target target, CoeffClass coeff) {
  switch (target) {
    case Target::kDc: return coeff == CoeffClass::kDc;
    case Target::kAc: return coeff == CoeffClass::kAc;
    case Target::kBoth: return true;
  }
  return false;
}

char LabelChar(BitKind kind) {
  switch (kind) {
    case BitKind::kHuffman: return 'H';
    case BitKind::kAdditional: return 'A';
    case BitKind::kStuffed: return 'S';
    case BitKind::kPad: return 'P';
    case BitKind::kRestart: return 'R';
  }
  return '?';
}

}  // namespace

BitLabelMap::BitLabelMap(size_t span_offset, std::vector<uint8_t> bytes,
                         std::vector<BitLabel> labels)
    : span_offset_(span_offset),
      bytes_(std::move(bytes)),
      labels_(std::move(labels)) {
  if (labels_.size() != 8 * bytes_.size()) {
    throw std::invalid_argument("BitLabelMap needs exactly 8 labels per byte");
  }
}

std::string BitLabelMap::LabelString(size_t byte) const {
  std::string out(8, ' ');
  const auto l = labels(byte);
  for (int i = 0; i < 8; ++i) out[i] = LabelChar(l[i].kind);
  return out;
}

bool BitLabelMap::SameStructure(const BitLabelMap& other) const {
  return span_offset_ == other.span_offset_ && labels_ == other.labels_;
}

BitLabelMap LabelSpan(std::span<const uint8_t> span, size_t span_offset,
                      const ScanInfo& scan, const FrameInfo& frame,
                      const HuffmanTableSet& tables, ScanTrace* trace) {
  std::vector<BitLabel> labels(8 * span.size());
  LabelingCursor cursor(span, span_offset, &labels);
  SpanWalker walker(&cursor, tables, trace);

  const bool interleaved = scan.components.size() > 1;
  int mcu_cols = 0;
  int total_mcus = 0;
  if (interleaved) {
    mcu_cols = frame.mcu_cols();
    total_mcus = mcu_cols * frame.mcu_rows();
  } else {
    const size_t c = scan.components[0].frame_index;
    mcu_cols = frame.width_in_blocks(c);
    total_mcus = mcu_cols * frame.height_in_blocks(c);
  }

  int next_restart = 0;
  for (int mcu = 0; mcu < total_mcus; ++mcu) {
    if (scan.restart_interval > 0 && mcu > 0 &&
        mcu % scan.restart_interval == 0) {
      cursor.AlignToByte();
      cursor.ExpectRestart(next_restart++);
      walker.ResetPredictors();
    }
    const int mcu_x = mcu % mcu_cols;
    const int mcu_y = mcu / mcu_cols;
    for (const ScanComponent& sc : scan.components) {
      if (!interleaved) {
        walker.DecodeBlock(sc, mcu_x, mcu_y);
        continue;
      }
      const FrameComponent& fc = frame.components[sc.frame_index];
      for (int v = 0; v < fc.v_samp; ++v) {
        for (int h = 0; h < fc.h_samp; ++h) {
          walker.DecodeBlock(sc, mcu_x * fc.h_samp + h, mcu_y * fc.v_samp + v);
        }
      }
    }
  }
  cursor.FinishSpan();

  return BitLabelMap(span_offset, std::vector<uint8_t>(span.begin(), span.end()),
                     std::move(labels));
}

ByteClass ClassifyByte(std::span<const BitLabel, 8> labels, uint8_t value,
                       Target target) {
  bool stuffed = false;
  bool has_huffman = false;
  bool has_additional = false;
  bool has_fixed = false;
  bool fixed_zero = false;
  uint8_t mask = 0;
  for (int i = 0; i < 8; ++i) {
    const int bit = (value >> (7 - i)) & 1;
    const BitLabel& label = labels[i];
    switch (label.kind) {
      case BitKind::kStuffed: stuffed = true; break;
      case BitKind::kHuffman: has_huffman = true; break;
      case BitKind::kAdditional:
        has_additional = true;
        if (Matches(target, label.coeff)) {
          mask |= static_cast<uint8_t>(0x80 >> i);
        }
        break;
      case BitKind::kPad:
      case BitKind::kRestart: break;
    }
    if (label.kind != BitKind::kAdditional) {
      has_fixed = true;
      if (bit == 0) fixed_zero = true;
    }
  }

  ByteClass out;
  if (stuffed) {
    out.reason = ExclusionReason::kStuffedZero;
  } else if (!has_additional && !has_huffman) {
    out.reason = ExclusionReason::kMarkerOrPad;
  } else if (!has_additional) {
    out.reason = ExclusionReason::kAllHuffman;
  } else if (mask == 0) {
    out.reason = ExclusionReason::kNoTargetBits;
  } else if (!has_fixed) {
    out.reason = ExclusionReason::kAllAdditional;
  } else if (!fixed_zero) {
    out.reason = ExclusionReason::kFixedBitsAllOnes;
  } else {
    out.mask = mask;
  }
  return out;
}

std::vector<ByteClass> ClassifyEntropyBytes(const BitLabelMap& map,
                                            Target target) {
  std::vector<ByteClass> out;
  out.reserve(map.size());
  for (size_t i = 0; i < map.size(); ++i) {
    ByteClass c = ClassifyByte(map.labels(i), map.value(i), target);
    c.offset = i;
    out.push_back(c);
  }
  return out;
}

std::vector<LabeledSpan> LabelDocument(const BitstreamDocument& doc,
                                       std::vector<ScanTrace>* traces) {
  std::vector<LabeledSpan> out;
  for (auto& ctx : LocateEntropySpans(doc)) {
    const Element& el = doc.elements[ctx.element_index];
    ScanTrace* trace = nullptr;
    if (traces != nullptr) trace = &traces->emplace_back();
    BitLabelMap map = LabelSpan(el.raw_bytes, el.offset, ctx.scan, ctx.frame,
                                ctx.tables, trace);
    out.push_back({std::move(ctx), std::move(map)});
  }
  return out;
}

const char* TargetName(Target target) {
  switch (target) {
    case Target::kDc: return "dc";
    case Target::kAc: return "ac";
    case Target::kBoth: return "both";
  }
  return "?";
}

std::optional<Target> ParseTarget(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "dc") return Target::kDc;
  if (lower == "ac") return Target::kAc;
  if (lower == "both") return Target::kBoth;
  return std::nullopt;
}

const char* ExclusionReasonName(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kMarkerOrPad: return "MarkerOrPad";
    case ExclusionReason::kStuffedZero: return "StuffedZero";
    case ExclusionReason::kAllHuffman: return "AllHuffman";
    case ExclusionReason::kNoTargetBits: return "NoTargetBits";
    case ExclusionReason::kAllAdditional: return "AllAdditional";
    case ExclusionReason::kFixedBitsAllOnes: return "FixedBitsAllOnes";
  }
  return "?";
}

std::string FormatByteClass(const BitLabelMap& map, const ByteClass& cls,
                            DumpFormat format) {
  const size_t offset = map.span_offset() + cls.offset;
  const uint8_t value = map.value(cls.offset);
  const std::string labels = map.LabelString(cls.offset);
  char hex[3];
  std::snprintf(hex, sizeof(hex), "%02X", value);
  char mask[3];
  std::snprintf(mask, sizeof(mask), "%02X", cls.mask);

  if (format == DumpFormat::kJson) {
    nlohmann::json line = {{"offset", offset},
                           {"value", hex},
                           {"labels", labels},
                           {"verdict", cls.encryptable() ? "encrypt" : "exclude"}};
    if (cls.encryptable()) {
      line["mask"] = mask;
    } else {
      line["reason"] = ExclusionReasonName(*cls.reason);
    }
    return line.dump();
  }
  char buf[96];
  if (cls.encryptable()) {
    std::snprintf(buf, sizeof(buf), "%10zu  %s  %s  encrypt  mask=%s", offset,
                  hex, labels.c_str(), mask);
  } else {
    std::snprintf(buf, sizeof(buf), "%10zu  %s  %s  exclude  %s", offset, hex,
                  labels.c_str(), ExclusionReasonName(*cls.reason));
  }
  return buf;
}

}  // namespace jpegfp
