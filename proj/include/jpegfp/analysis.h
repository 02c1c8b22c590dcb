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

#ifndef JPEGFP_ANALYSIS_H_
#define JPEGFP_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "jpegfp/entropy_scanner.h"

namespace jpegfp {

// Byte-classification counts over the entropy-coded data for one target.
// The categories partition the entropy bytes.
struct TargetStats {
  size_t encrypted_bytes = 0;
  size_t excluded_all_additional = 0;
  size_t excluded_fixed_ones = 0;
  size_t all_huffman_bytes = 0;
  size_t non_target_bytes = 0;
  size_t stuffed_bytes = 0;
  size_t marker_or_pad_bytes = 0;
  size_t encrypted_bits = 0;

  // Bytes whose additional bits had to stay in the clear: all-additional
  // bytes and bytes whose fixed bits are all ones.
  size_t excluded_bytes() const {
    return excluded_all_additional + excluded_fixed_ones;
  }
  // encrypted / (encrypted + excluded) * 100, or 0 when both are zero.
  double percentage() const;
  size_t total() const;
};

TargetStats ComputeTargetStats(std::span<const ByteClass> classes);

struct ScanReport {
  size_t original_size = 0;
  size_t encrypted_size = 0;
  size_t entropy_bytes = 0;
  size_t non_entropy_bytes = 0;
  TargetStats dc;
  TargetStats ac;
  TargetStats both;

  long long size_diff() const {
    return static_cast<long long>(encrypted_size) -
           static_cast<long long>(original_size);
  }
  const TargetStats& stats(Target target) const;
};

// Classifies the original for every target. `encrypted` only contributes its
// size; it must parse as well.
ScanReport ComputeReport(std::span<const uint8_t> original,
                         std::span<const uint8_t> encrypted);

// True iff the "both" percentages do not increase from one report to the
// next (reports ordered by increasing quality).
bool TrendCheck(std::span<const ScanReport> reports_by_quality);
bool TrendCheck(std::span<const double> percentages_by_quality);

struct StructureMismatch {
  size_t offset = 0;  // absolute file offset of the first difference
  std::string description;
};

// Compares two files the way a decoder sees them: sizes, marker elements,
// non-entropy bytes, stuffing and marker positions, per-bit labels, and the
// decoded (run, category) symbol sequence. Only additional-bit values may
// differ. Returns the first mismatch, or nullopt when the structures agree.
// Parse errors in either file propagate.
std::optional<StructureMismatch> CompareStructure(
    std::span<const uint8_t> original, std::span<const uint8_t> encrypted);

nlohmann::json ReportToJson(const ScanReport& report);
std::string ReportToTable(const ScanReport& report);

}  // namespace jpegfp

#endif  // JPEGFP_ANALYSIS_H_
