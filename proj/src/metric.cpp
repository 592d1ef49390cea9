// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/metric.hpp"

#include <map>

#include "segdelta/error.hpp"

namespace segdelta {

std::optional<double> delta_value(std::uint64_t s_count, std::uint64_t e_count,
                                  std::uint64_t eh_count, bool human,
                                  double alpha) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::NegativeAlpha,
                "alpha must be non-negative, got " + std::to_string(alpha));
  }
  if (s_count == 0) return std::nullopt;
  if (!human) {
    return double(e_count) / double(s_count);
  }
  const double weighted = alpha * double(eh_count);
  return (double(e_count) + weighted) / (double(s_count) + weighted);
}

std::vector<LabelPair> pair_labels(const LabeledCloud& reference,
                                   const LabeledCloud& degraded,
                                   const NnMap& map) {
  if (map.size() != reference.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "map has " + std::to_string(map.size()) + " entries for " +
                    std::to_string(reference.size()) + " reference points");
  }
  std::vector<LabelPair> pairs;
  pairs.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const std::uint32_t target = map.target_index[i];
    if (target >= degraded.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "map entry " + std::to_string(i) + " points at " +
                      std::to_string(target) + ", degraded cloud has " +
                      std::to_string(degraded.size()) + " points");
    }
    pairs.push_back({reference.labels[i], degraded.labels[target]});
  }
  return pairs;
}

LabelMetricResult delta(std::span<const LabelPair> pairs, std::uint16_t label) {
  LabelMetricResult result;
  result.label = label;
  for (const LabelPair& p : pairs) {
    if (p.ref == label || p.deg == label) {
      ++result.s_count;
      if (p.ref != p.deg) ++result.e_count;
    }
  }
  result.delta = delta_value(result.s_count, result.e_count, 0, false, 0.0);
  return result;
}

LabelMetricResult delta_human(std::span<const LabelPair> pairs,
                              std::uint16_t human_label, double alpha) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::NegativeAlpha,
                "alpha must be non-negative, got " + std::to_string(alpha));
  }
  LabelMetricResult result;
  result.label = human_label;
  for (const LabelPair& p : pairs) {
    if (p.ref == human_label || p.deg == human_label) {
      ++result.s_count;
      if (p.ref != p.deg) {
        ++result.e_count;
        if (p.ref == human_label) ++result.eh_count;
      }
    }
  }
  result.delta = delta_value(result.s_count, result.e_count, result.eh_count,
                             true, alpha);
  return result;
}

std::vector<LabelMetricResult> evaluate_labels(std::span<const LabelPair> pairs,
                                               const MetricConfig& config) {
  if (!(config.alpha >= 0.0)) {
    throw Error(ErrorCode::NegativeAlpha,
                "alpha must be non-negative, got " +
                    std::to_string(config.alpha));
  }
  struct Counts {
    std::uint64_t s = 0;
    std::uint64_t e = 0;
    std::uint64_t eh = 0;  // human reference label turned non-human
  };
  std::map<std::uint16_t, Counts> by_label;
  for (const LabelPair& p : pairs) {
    if (p.ref == p.deg) {
      ++by_label[p.ref].s;
      continue;
    }
    Counts& r = by_label[p.ref];
    ++r.s;
    ++r.e;
    if (!config.is_human(p.deg)) ++r.eh;
    Counts& d = by_label[p.deg];
    ++d.s;
    ++d.e;
  }

  std::vector<LabelMetricResult> results;
  results.reserve(by_label.size());
  for (const auto& [label, counts] : by_label) {
    LabelMetricResult r;
    r.label = label;
    r.s_count = counts.s;
    r.e_count = counts.e;
    r.eh_count = config.is_human(label) ? counts.eh : 0;
    r.delta = delta_value(r.s_count, r.e_count, r.eh_count,
                          config.is_human(label), config.alpha);
    results.push_back(r);
  }
  return results;
}

void rescore(std::vector<LabelMetricResult>& results,
             const MetricConfig& config) {
  for (LabelMetricResult& r : results) {
    r.delta = delta_value(r.s_count, r.e_count, r.eh_count,
                          config.is_human(r.label), config.alpha);
  }
}

std::vector<LabelMetricResult> evaluate_pair(const ScanPair& pair,
                                             const MetricConfig& config,
                                             unsigned jobs) {
  if (pair.reference.empty()) {
    throw Error(ErrorCode::EmptyCloud, "reference cloud is empty");
  }
  if (pair.degraded.empty()) {
    throw Error(ErrorCode::EmptyCloud, "degraded cloud is empty");
  }
  const SpatialIndex index(pair.degraded.positions);
  const NnMap map = nearest_map(pair.reference.positions, index, jobs);
  const std::vector<LabelPair> pairs =
      pair_labels(pair.reference, pair.degraded, map);
  return evaluate_labels(pairs, config);
}

}  // namespace segdelta
