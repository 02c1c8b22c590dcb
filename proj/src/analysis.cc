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

#include "jpegfp/analysis.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <vector>

#include "jpegfp/document.h"

namespace jpegfp {

double TargetStats::percentage() const {
  const size_t denom = encrypted_bytes + excluded_bytes();
  if (denom == 0) return 0.0;
  return 100.0 * static_cast<double>(encrypted_bytes) /
         static_cast<double>(denom);
}

size_t TargetStats::total() const {
  return encrypted_bytes + excluded_bytes() + all_huffman_bytes +
         non_target_bytes + stuffed_bytes + marker_or_pad_bytes;
}

TargetStats ComputeTargetStats(std::span<const ByteClass> classes) {
  TargetStats s;
  for (const ByteClass& c : classes) {
    if (c.encryptable()) {
      ++s.encrypted_bytes;
      s.encrypted_bits += std::popcount(c.mask);
      continue;
    }
    switch (*c.reason) {
      case ExclusionReason::kMarkerOrPad: ++s.marker_or_pad_bytes; break;
      case ExclusionReason::kStuffedZero: ++s.stuffed_bytes; break;
      case ExclusionReason::kAllHuffman: ++s.all_huffman_bytes; break;
      case ExclusionReason::kNoTargetBits: ++s.non_target_bytes; break;
      case ExclusionReason::kAllAdditional: ++s.excluded_all_additional; break;
      case ExclusionReason::kFixedBitsAllOnes: ++s.excluded_fixed_ones; break;
    }
  }
  return s;
}

const TargetStats& ScanReport::stats(Target target) const {
  switch (target) {
    case Target::kDc: return dc;
    case Target::kAc: return ac;
    case Target::kBoth: break;
  }
  return both;
}

ScanReport ComputeReport(std::span<const uint8_t> original,
                         std::span<const uint8_t> encrypted) {
  const BitstreamDocument doc = ParseDocument(original);
  ParseDocument(encrypted);
  const std::vector<LabeledSpan> spans = LabelDocument(doc);

  ScanReport report;
  report.original_size = original.size();
  report.encrypted_size = encrypted.size();
  std::vector<ByteClass> dc, ac, both;
  for (const LabeledSpan& s : spans) {
    report.entropy_bytes += s.labels.size();
    for (auto [target, out] : {std::pair{Target::kDc, &dc},
                               std::pair{Target::kAc, &ac},
                               std::pair{Target::kBoth, &both}}) {
      const auto classes = ClassifyEntropyBytes(s.labels, target);
      out->insert(out->end(), classes.begin(), classes.end());
    }
  }
  report.non_entropy_bytes = report.original_size - report.entropy_bytes;
  report.dc = ComputeTargetStats(dc);
  report.ac = ComputeTargetStats(ac);
  report.both = ComputeTargetStats(both);
  return report;
}

bool TrendCheck(std::span<const double> percentages_by_quality) {
  for (size_t i = 1; i < percentages_by_quality.size(); ++i) {
    if (percentages_by_quality[i] > percentages_by_quality[i - 1]) return false;
  }
  return true;
}

bool TrendCheck(std::span<const ScanReport> reports_by_quality) {
  std::vector<double> p;
  for (const auto& r : reports_by_quality) p.push_back(r.both.percentage());
  return TrendCheck(p);
}

std::optional<StructureMismatch> CompareStructure(
    std::span<const uint8_t> original, std::span<const uint8_t> encrypted) {
  if (original.size() != encrypted.size()) {
    return StructureMismatch{std::min(original.size(), encrypted.size()),
                             "file sizes differ: " +
                                 std::to_string(original.size()) + " vs " +
                                 std::to_string(encrypted.size())};
  }
  const BitstreamDocument a = ParseDocument(original);
  const BitstreamDocument b = ParseDocument(encrypted);
  const size_t common = std::min(a.elements.size(), b.elements.size());
  for (size_t i = 0; i < common; ++i) {
    const Element& x = a.elements[i];
    const Element& y = b.elements[i];
    if (x.kind != y.kind || x.marker_code != y.marker_code ||
        x.offset != y.offset || x.raw_bytes.size() != y.raw_bytes.size()) {
      return StructureMismatch{std::min(x.offset, y.offset),
                               "marker structure differs at element " +
                                   std::to_string(i)};
    }
    if (x.kind != ElementKind::kEntropySpan && x.raw_bytes != y.raw_bytes) {
      const auto diff = std::mismatch(x.raw_bytes.begin(), x.raw_bytes.end(),
                                      y.raw_bytes.begin());
      return StructureMismatch{
          x.offset + static_cast<size_t>(diff.first - x.raw_bytes.begin()),
          "bytes outside the entropy-coded data differ"};
    }
  }
  if (a.elements.size() != b.elements.size()) {
    return StructureMismatch{original.size(), "element counts differ"};
  }

  std::vector<ScanTrace> trace_a, trace_b;
  const auto spans_a = LabelDocument(a, &trace_a);
  const auto spans_b = LabelDocument(b, &trace_b);
  for (size_t s = 0; s < spans_a.size(); ++s) {
    const BitLabelMap& la = spans_a[s].labels;
    const BitLabelMap& lb = spans_b[s].labels;
    for (size_t i = 0; i < la.size(); ++i) {
      const auto x = la.labels(i);
      const auto y = lb.labels(i);
      if (!std::equal(x.begin(), x.end(), y.begin())) {
        return StructureMismatch{la.span_offset() + i,
                                 "bit labels differ (" + la.LabelString(i) +
                                     " vs " + lb.LabelString(i) + ")"};
      }
    }
    const auto& blocks_a = trace_a[s].blocks;
    const auto& blocks_b = trace_b[s].blocks;
    for (size_t k = 0; k < blocks_a.size(); ++k) {
      const auto& sa = blocks_a[k].symbols;
      const auto& sb = blocks_b[k].symbols;
      const bool same = std::equal(
          sa.begin(), sa.end(), sb.begin(), sb.end(),
          [](const SymbolRecord& p, const SymbolRecord& q) {
            return p.coeff == q.coeff && p.run == q.run &&
                   p.category == q.category;
          });
      if (!same) {
        return StructureMismatch{la.span_offset(),
                                 "symbol sequence differs in block " +
                                     std::to_string(k)};
      }
    }
  }
  return std::nullopt;
}

namespace {

nlohmann::json StatsToJson(const TargetStats& s) {
  return {{"encrypted_bytes", s.encrypted_bytes},
          {"excluded_bytes", s.excluded_bytes()},
          {"excluded_all_additional", s.excluded_all_additional},
          {"excluded_fixed_ones", s.excluded_fixed_ones},
          {"all_huffman_bytes", s.all_huffman_bytes},
          {"non_target_bytes", s.non_target_bytes},
          {"stuffed_bytes", s.stuffed_bytes},
          {"marker_or_pad_bytes", s.marker_or_pad_bytes},
          {"encrypted_bits", s.encrypted_bits},
          {"percentage", s.percentage()}};
}

}  // namespace

nlohmann::json ReportToJson(const ScanReport& report) {
  return {{"original_size", report.original_size},
          {"encrypted_size", report.encrypted_size},
          {"size_diff", report.size_diff()},
          {"entropy_bytes", report.entropy_bytes},
          {"non_entropy_bytes", report.non_entropy_bytes},
          {"targets",
           {{"dc", StatsToJson(report.dc)},
            {"ac", StatsToJson(report.ac)},
            {"both", StatsToJson(report.both)}}}};
}

std::string ReportToTable(const ScanReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %12s %12s %10s %12s %10s\n",
                "target", "excluded", "encrypted", "percent", "all-huffman",
                "stuffed");
  out += line;
  for (Target t : {Target::kDc, Target::kAc, Target::kBoth}) {
    const TargetStats& s = report.stats(t);
    std::snprintf(line, sizeof(line), "%-8s %12zu %12zu %9.1f%% %12zu %10zu\n",
                  TargetName(t), s.excluded_bytes(), s.encrypted_bytes,
                  s.percentage(), s.all_huffman_bytes, s.stuffed_bytes);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "size: original %zu, encrypted %zu (%+lld)\n",
                report.original_size, report.encrypted_size,
                report.size_diff());
  out += line;
  return out;
}

}  // namespace jpegfp
