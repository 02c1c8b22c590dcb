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

#include "jpegfp/document.h"

#include <algorithm>
#include <string>

#include "jpegfp/error.h"

namespace jpegfp {

namespace {

int DivCeil(int a, int b) { return (a + b - 1) / b; }

int ReadUint16(std::span<const uint8_t> data, size_t pos) {
  return (data[pos] << 8) | data[pos + 1];
}

std::string Hex(uint8_t v) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  return {kDigits[v >> 4], kDigits[v & 15]};
}

bool IsFrameMarker(uint8_t code) {
  return code >= 0xC0 && code <= 0xCF && code != marker::kDht;
}

Element MakeElement(ElementKind kind, uint8_t code,
                    std::span<const uint8_t> bytes, size_t begin, size_t end) {
  Element e;
  e.kind = kind;
  e.marker_code = code;
  e.offset = begin;
  e.raw_bytes.assign(bytes.begin() + begin, bytes.begin() + end);
  return e;
}

// Returns the offset of the marker that terminates the entropy-coded data
// starting at `pos`. Stuffed 00 bytes and RSTn markers belong to the data;
// fill bytes (runs of FF) before the terminating marker stay in the span.
size_t FindEntropyEnd(std::span<const uint8_t> bytes, size_t pos) {
  const size_t n = bytes.size();
  size_t p = pos;
  while (true) {
    if (p >= n) {
      throw Error(ErrorCode::kUnexpectedEof,
                  "entropy-coded data runs to end of file", pos);
    }
    if (bytes[p] != 0xFF) {
      ++p;
      continue;
    }
    size_t q = p;
    while (q < n && bytes[q] == 0xFF) ++q;
    if (q >= n) {
      throw Error(ErrorCode::kUnexpectedEof,
                  "entropy-coded data ends inside a marker", p);
    }
    const uint8_t next = bytes[q];
    if (next == 0x00) {
      if (q != p + 1) {
        throw Error(ErrorCode::kMalformedSegment,
                    "fill bytes before a stuffed zero", p);
      }
      p = q + 1;
    } else if (marker::IsRestart(next)) {
      p = q + 1;
    } else {
      return q - 1;
    }
  }
}

FrameInfo ParseFrame(const Element& el) {
  const auto data = el.payload();
  if (data.size() < 6) {
    throw Error(ErrorCode::kMalformedSegment, "SOF0 segment too short",
                el.offset);
  }
  FrameInfo frame;
  frame.precision = data[0];
  frame.height = ReadUint16(data, 1);
  frame.width = ReadUint16(data, 3);
  const int count = data[5];
  if (frame.precision != 8) {
    throw Error(ErrorCode::kUnsupportedFrame,
                "baseline requires 8-bit samples, got " +
                    std::to_string(frame.precision),
                el.offset);
  }
  if (frame.height == 0) {
    throw Error(ErrorCode::kUnsupportedScan,
                "frame height deferred to a DNL marker", el.offset);
  }
  if (frame.width == 0) {
    throw Error(ErrorCode::kMalformedSegment, "frame width is zero",
                el.offset);
  }
  if (count < 1 || count > 4) {
    throw Error(ErrorCode::kMalformedSegment,
                "component count " + std::to_string(count) + " not in 1..4",
                el.offset);
  }
  if (data.size() != 6 + 3 * static_cast<size_t>(count)) {
    throw Error(ErrorCode::kMalformedSegment,
                "SOF0 length disagrees with component count", el.offset);
  }
  for (int i = 0; i < count; ++i) {
    FrameComponent c;
    c.id = data[6 + 3 * i];
    c.h_samp = data[7 + 3 * i] >> 4;
    c.v_samp = data[7 + 3 * i] & 0x0f;
    c.quant_table = data[8 + 3 * i];
    if (c.h_samp < 1 || c.h_samp > 4 || c.v_samp < 1 || c.v_samp > 4) {
      throw Error(ErrorCode::kMalformedSegment,
                  "sampling factors out of range for component " +
                      std::to_string(c.id),
                  el.offset);
    }
    for (const auto& other : frame.components) {
      if (other.id == c.id) {
        throw Error(ErrorCode::kMalformedSegment,
                    "duplicate component id " + std::to_string(c.id),
                    el.offset);
      }
    }
    frame.components.push_back(c);
  }
  return frame;
}

void ParseHuffmanTables(const Element& el, HuffmanTableSet* tables) {
  const auto data = el.payload();
  size_t pos = 0;
  while (pos < data.size()) {
    if (pos + 17 > data.size()) {
      throw Error(ErrorCode::kMalformedSegment, "truncated DHT entry",
                  el.offset);
    }
    const int table_class = data[pos] >> 4;
    const int id = data[pos] & 0x0f;
    if (table_class > 1 || id > 3) {
      throw Error(ErrorCode::kMalformedSegment,
                  "invalid DHT class/id byte 0x" + Hex(data[pos]), el.offset);
    }
    const auto counts = data.subspan(pos + 1).first<16>();
    size_t total = 0;
    for (uint8_t c : counts) total += c;
    if (pos + 17 + total > data.size()) {
      throw Error(ErrorCode::kMalformedSegment, "truncated DHT symbol list",
                  el.offset);
    }
    const auto symbols = data.subspan(pos + 17, total);
    const auto cls = table_class == 0 ? TableClass::kDc : TableClass::kAc;
    try {
      auto table = HuffmanTable::Build(cls, id, counts, symbols);
      (cls == TableClass::kDc ? tables->dc : tables->ac)[id] = std::move(table);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("in DHT segment: ") + e.what(),
                  el.offset);
    }
    pos += 17 + total;
  }
}

ScanInfo ParseScan(const Element& el, const FrameInfo& frame,
                   const HuffmanTableSet& tables, int restart_interval) {
  const auto data = el.payload();
  if (data.empty()) {
    throw Error(ErrorCode::kMalformedSegment, "empty SOS segment", el.offset);
  }
  const int count = data[0];
  if (count < 1 || count > 4 || data.size() != 4 + 2 * static_cast<size_t>(count)) {
    throw Error(ErrorCode::kMalformedSegment,
                "SOS length disagrees with component count", el.offset);
  }
  ScanInfo scan;
  scan.restart_interval = restart_interval;
  for (int i = 0; i < count; ++i) {
    const int id = data[1 + 2 * i];
    const auto it = std::find_if(
        frame.components.begin(), frame.components.end(),
        [id](const FrameComponent& c) { return c.id == id; });
    if (it == frame.components.end()) {
      throw Error(ErrorCode::kMalformedSegment,
                  "scan references unknown component " + std::to_string(id),
                  el.offset);
    }
    ScanComponent sc;
    sc.frame_index = static_cast<size_t>(it - frame.components.begin());
    sc.dc_table = data[2 + 2 * i] >> 4;
    sc.ac_table = data[2 + 2 * i] & 0x0f;
    if (sc.dc_table > 3 || !tables.dc[sc.dc_table].has_value()) {
      throw Error(ErrorCode::kMissingHuffmanTable,
                  "DC table " + std::to_string(sc.dc_table) + " not defined",
                  el.offset);
    }
    if (sc.ac_table > 3 || !tables.ac[sc.ac_table].has_value()) {
      throw Error(ErrorCode::kMissingHuffmanTable,
                  "AC table " + std::to_string(sc.ac_table) + " not defined",
                  el.offset);
    }
    scan.components.push_back(sc);
  }
  const size_t tail = 1 + 2 * static_cast<size_t>(count);
  if (data[tail] != 0 || data[tail + 1] != 63 || data[tail + 2] != 0) {
    throw Error(ErrorCode::kUnsupportedScan,
                "spectral selection/approximation is not baseline", el.offset);
  }
  return scan;
}

}  // namespace

std::span<const uint8_t> Element::payload() const {
  if (kind != ElementKind::kSegment || raw_bytes.size() < 4) return {};
  return std::span<const uint8_t>(raw_bytes).subspan(4);
}

int FrameInfo::max_h_samp() const {
  int m = 1;
  for (const auto& c : components) m = std::max(m, c.h_samp);
  return m;
}

int FrameInfo::max_v_samp() const {
  int m = 1;
  for (const auto& c : components) m = std::max(m, c.v_samp);
  return m;
}

int FrameInfo::mcu_cols() const { return DivCeil(width, 8 * max_h_samp()); }
int FrameInfo::mcu_rows() const { return DivCeil(height, 8 * max_v_samp()); }

int FrameInfo::width_in_blocks(size_t component) const {
  const int samples =
      DivCeil(width * components[component].h_samp, max_h_samp());
  return DivCeil(samples, 8);
}

int FrameInfo::height_in_blocks(size_t component) const {
  const int samples =
      DivCeil(height * components[component].v_samp, max_v_samp());
  return DivCeil(samples, 8);
}

BitstreamDocument ParseDocument(std::span<const uint8_t> bytes) {
  const size_t n = bytes.size();
  if (n < 2 || bytes[0] != 0xFF || bytes[1] != marker::kSoi) {
    throw Error(ErrorCode::kMissingSoi, "file does not start with FF D8", 0);
  }
  BitstreamDocument doc;
  doc.total_length = n;
  doc.elements.push_back(MakeElement(ElementKind::kMarker, marker::kSoi, bytes, 0, 2));

  size_t pos = 2;
  bool seen_eoi = false;
  while (pos < n) {
    if (pos + 2 > n) {
      throw Error(ErrorCode::kUnexpectedEof, "truncated marker", pos);
    }
    if (bytes[pos] != 0xFF) {
      throw Error(ErrorCode::kMalformedSegment,
                  "expected marker, found byte 0x" + Hex(bytes[pos]), pos);
    }
    const uint8_t code = bytes[pos + 1];
    if (code == 0x00 || code == 0xFF) {
      throw Error(ErrorCode::kMalformedSegment,
                  "invalid marker code FF " + Hex(code), pos);
    }
    if (code == marker::kEoi) {
      doc.elements.push_back(MakeElement(ElementKind::kMarker, code, bytes, pos, pos + 2));
      pos += 2;
      seen_eoi = true;
      break;
    }
    if (code == marker::kSoi) {
      throw Error(ErrorCode::kMalformedSegment, "repeated SOI marker", pos);
    }
    if (code == marker::kDnl) {
      throw Error(ErrorCode::kUnsupportedScan, "DNL marker is not supported", pos);
    }
    if (marker::IsRestart(code) || code == marker::kTem) {
      doc.elements.push_back(MakeElement(ElementKind::kMarker, code, bytes, pos, pos + 2));
      pos += 2;
      continue;
    }
    if (IsFrameMarker(code)) {
      if (code != marker::kSof0) {
        throw Error(ErrorCode::kUnsupportedFrame,
                    "SOF marker FF " + Hex(code) +
                        " is not baseline sequential Huffman (SOF0)",
                    pos);
      }
      if (doc.sof_index.has_value()) {
        throw Error(ErrorCode::kMalformedSegment, "second SOF marker", pos);
      }
    }
    if (pos + 4 > n) {
      throw Error(ErrorCode::kUnexpectedEof, "truncated segment length", pos);
    }
    const size_t length = ReadUint16(bytes, pos + 2);
    if (length < 2) {
      throw Error(ErrorCode::kMalformedSegment,
                  "segment length " + std::to_string(length) + " below 2", pos);
    }
    if (pos + 2 + length > n) {
      throw Error(ErrorCode::kUnexpectedEof,
                  "segment FF " + Hex(code) + " extends past end of file", pos);
    }
    const size_t index = doc.elements.size();
    doc.elements.push_back(
        MakeElement(ElementKind::kSegment, code, bytes, pos, pos + 2 + length));
    pos += 2 + length;

    switch (code) {
      case marker::kSof0: doc.sof_index = index; break;
      case marker::kDht: doc.dht_indices.push_back(index); break;
      case marker::kDqt: doc.dqt_indices.push_back(index); break;
      case marker::kDri: doc.dri_indices.push_back(index); break;
      case marker::kSos: {
        if (doc.sos_index.has_value()) {
          throw Error(ErrorCode::kUnsupportedScan,
                      "multiple scans (progressive or multi-scan sequential)",
                      doc.elements[index].offset);
        }
        doc.sos_index = index;
        const size_t end = FindEntropyEnd(bytes, pos);
        doc.elements.push_back(
            MakeElement(ElementKind::kEntropySpan, 0, bytes, pos, end));
        pos = end;
        break;
      }
      default: break;
    }
  }
  if (!seen_eoi) {
    throw Error(ErrorCode::kUnexpectedEof, "missing EOI marker", n);
  }
  if (pos != n) {
    throw Error(ErrorCode::kTrailingData,
                std::to_string(n - pos) + " bytes after EOI", pos);
  }
  return doc;
}

std::vector<uint8_t> SerializeDocument(const BitstreamDocument& doc) {
  std::vector<uint8_t> out;
  out.reserve(doc.total_length);
  for (const auto& el : doc.elements) {
    out.insert(out.end(), el.raw_bytes.begin(), el.raw_bytes.end());
  }
  return out;
}

std::vector<EntropySpanContext> LocateEntropySpans(const BitstreamDocument& doc) {
  std::optional<FrameInfo> frame;
  HuffmanTableSet tables;
  int restart_interval = 0;
  std::vector<EntropySpanContext> out;

  for (size_t i = 0; i < doc.elements.size(); ++i) {
    const Element& el = doc.elements[i];
    if (el.kind != ElementKind::kSegment) continue;
    switch (el.marker_code) {
      case marker::kSof0:
        frame = ParseFrame(el);
        break;
      case marker::kDht:
        ParseHuffmanTables(el, &tables);
        break;
      case marker::kDri: {
        const auto data = el.payload();
        if (data.size() != 2) {
          throw Error(ErrorCode::kMalformedSegment, "DRI payload must be 2 bytes",
                      el.offset);
        }
        restart_interval = ReadUint16(data, 0);
        break;
      }
      case marker::kSos: {
        if (!frame.has_value()) {
          throw Error(ErrorCode::kMissingSof, "SOS before SOF0", el.offset);
        }
        if (i + 1 >= doc.elements.size() ||
            doc.elements[i + 1].kind != ElementKind::kEntropySpan) {
          throw Error(ErrorCode::kMalformedSegment,
                      "SOS not followed by entropy-coded data", el.offset);
        }
        EntropySpanContext ctx;
        ctx.element_index = i + 1;
        ctx.scan = ParseScan(el, *frame, tables, restart_interval);
        ctx.frame = *frame;
        ctx.tables = tables;
        out.push_back(std::move(ctx));
        break;
      }
      default:
        break;
    }
  }
  return out;
}

}  // namespace jpegfp
