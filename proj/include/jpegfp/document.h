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

#ifndef JPEGFP_DOCUMENT_H_
#define JPEGFP_DOCUMENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jpegfp/huffman.h"

namespace jpegfp {

// Marker codes (second byte after 0xFF).
namespace marker {
inline constexpr uint8_t kSof0 = 0xC0;
inline constexpr uint8_t kDht = 0xC4;
inline constexpr uint8_t kRst0 = 0xD0;
inline constexpr uint8_t kRst7 = 0xD7;
inline constexpr uint8_t kSoi = 0xD8;
inline constexpr uint8_t kEoi = 0xD9;
inline constexpr uint8_t kSos = 0xDA;
inline constexpr uint8_t kDqt = 0xDB;
inline constexpr uint8_t kDnl = 0xDC;
inline constexpr uint8_t kDri = 0xDD;
inline constexpr uint8_t kTem = 0x01;

inline constexpr bool IsRestart(uint8_t code) {
  return code >= kRst0 && code <= kRst7;
}
}  // namespace marker

enum class ElementKind { kMarker, kSegment, kEntropySpan };

// One contiguous run of the source file. Markers are the bare two bytes,
// segments are marker + length field + payload, and an entropy span is the
// scan data between an SOS segment and the next non-RST marker (restart
// markers included).
struct Element {
  ElementKind kind = ElementKind::kMarker;
  uint8_t marker_code = 0;  // 0 for entropy spans
  size_t offset = 0;
  std::vector<uint8_t> raw_bytes;

  size_t end() const { return offset + raw_bytes.size(); }
  // Segment payload after the two marker bytes and the two length bytes.
  std::span<const uint8_t> payload() const;

  friend bool operator==(const Element&, const Element&) = default;
};

struct BitstreamDocument {
  std::vector<Element> elements;
  size_t total_length = 0;

  // Element indices of segments the parser recognized.
  std::optional<size_t> sof_index;
  std::optional<size_t> sos_index;
  std::vector<size_t> dht_indices;
  std::vector<size_t> dqt_indices;
  std::vector<size_t> dri_indices;

  friend bool operator==(const BitstreamDocument&,
                         const BitstreamDocument&) = default;
};

struct FrameComponent {
  int id = 0;
  int h_samp = 1;
  int v_samp = 1;
  int quant_table = 0;

  friend bool operator==(const FrameComponent&,
                         const FrameComponent&) = default;
};

struct FrameInfo {
  int precision = 8;
  int width = 0;
  int height = 0;
  std::vector<FrameComponent> components;

  int max_h_samp() const;
  int max_v_samp() const;
  // Interleaved MCU grid.
  int mcu_cols() const;
  int mcu_rows() const;
  // Block grid of one component, not counting MCU padding.
  int width_in_blocks(size_t component) const;
  int height_in_blocks(size_t component) const;

  friend bool operator==(const FrameInfo&, const FrameInfo&) = default;
};

struct ScanComponent {
  size_t frame_index = 0;  // position in FrameInfo::components
  int dc_table = 0;
  int ac_table = 0;

  friend bool operator==(const ScanComponent&, const ScanComponent&) = default;
};

struct ScanInfo {
  std::vector<ScanComponent> components;
  int restart_interval = 0;  // MCUs between RST markers, 0 = none

  friend bool operator==(const ScanInfo&, const ScanInfo&) = default;
};

// Huffman tables in force at an SOS, after last-definition-wins resolution.
struct HuffmanTableSet {
  std::array<std::optional<HuffmanTable>, 4> dc;
  std::array<std::optional<HuffmanTable>, 4> ac;
};

struct EntropySpanContext {
  size_t element_index = 0;  // index of the kEntropySpan element
  ScanInfo scan;
  FrameInfo frame;
  HuffmanTableSet tables;
};

// Splits `bytes` into elements. Only baseline sequential Huffman frames
// (SOF0) with a single scan are accepted.
BitstreamDocument ParseDocument(std::span<const uint8_t> bytes);

// Concatenation of every element's raw bytes.
std::vector<uint8_t> SerializeDocument(const BitstreamDocument& doc);

// Interprets the SOF0/DHT/DRI/SOS segments preceding each entropy span.
std::vector<EntropySpanContext> LocateEntropySpans(const BitstreamDocument& doc);

}  // namespace jpegfp

#endif  // JPEGFP_DOCUMENT_H_
