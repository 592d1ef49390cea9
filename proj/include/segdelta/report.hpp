// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segdelta/metric.hpp"

namespace segdelta {

/// One row of a rate-distortion table: a rate point, its throughput, and the
/// pooled mismatch counts and delta for one label.
struct RdRecord {
  std::string rate_point;
  double throughput_mb_s = 0.0;
  std::uint16_t label_id = 0;
  std::string label_name;
  std::optional<double> delta;
  std::uint64_t s_count = 0;
  std::uint64_t e_count = 0;
  std::uint64_t eh_count = 0;
  std::uint64_t scan_count = 0;
};

enum class AggregateMode { Pooled, Mean };

struct AggregateOptions {
  AggregateMode mode = AggregateMode::Pooled;
  /// Label 0 is a dataset artifact, not a semantic class; off by default.
  bool include_unlabeled = false;
  /// Stamped onto every produced record.
  std::string rate_point = "custom";
  double throughput_mb_s = 0.0;
};

/**
 * Fold per-scan metric results into one record per label.
 *
 * Pooled mode divides pooled counts: sum s/e/eh over the scans where the
 * label occurs, then apply the delta formula once (with config.alpha for
 * human labels). Mean mode averages the per-scan deltas, skipping absent
 * ones. scan_count is the number of contributing scans (s_count > 0).
 * Throws EmptyInput.
 */
std::vector<RdRecord> aggregate(
    const std::vector<std::vector<LabelMetricResult>>& scans,
    const MetricConfig& config, const AggregateOptions& options);

/// Optional id -> name mapping, loaded from lines of `<id>,<name>`. Unknown
/// ids fall back to their decimal form.
class ClassMap {
 public:
  ClassMap() = default;
  static ClassMap load(const std::filesystem::path& path);

  void set(std::uint16_t id, std::string name);
  std::string name_of(std::uint16_t id) const;
  bool empty() const { return names_.empty(); }

 private:
  std::map<std::uint16_t, std::string> names_;
};

/// Fill every record's label_name from the map (or decimal fallback).
void apply_class_map(std::vector<RdRecord>& records, const ClassMap& map);

enum class OutputFormat { Csv, Json };

/// CSV columns: rate_point, throughput_mb_s, label_id, label_name, delta,
/// s_count, e_count, eh_count, scan_count. Absent delta is an empty field.
/// Rows are sorted by (rate point order, label id); ladder presets come
/// first in ladder order, other tags after them lexicographically. Floats
/// use shortest round-trip formatting, so emit(parse(x)) == x byte for byte.
std::string to_csv(std::vector<RdRecord> records);

/// Same keys and ordering as the CSV; absent delta serializes as null.
std::string to_json(std::vector<RdRecord> records);

std::vector<RdRecord> parse_csv(const std::string& text);
std::vector<RdRecord> parse_json(const std::string& text);

void emit(const std::vector<RdRecord>& records, OutputFormat format,
          const std::filesystem::path& destination);

/// Rate manifest for externally compressed runs: a JSON array of
/// {"scan_id": ..., "bitstream_bytes": ...} objects.
std::map<std::string, std::uint64_t> load_rate_manifest(
    const std::filesystem::path& path);

}  // namespace segdelta
