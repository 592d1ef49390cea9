// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "segdelta/cloud.hpp"
#include "segdelta/spatial_index.hpp"

namespace segdelta {

/// Semantic KITTI person class, the default human label.
inline constexpr std::uint16_t kPersonLabel = 30;

/// One matched pair: the reference point's label and the label of its
/// nearest degraded point.
struct LabelPair {
  std::uint16_t ref;
  std::uint16_t deg;
};

/// Per-label mismatch summary. s_count is the number of matched pairs
/// involving the label, e_count the mismatched subset, eh_count the pairs
/// where a human label turned non-human (zero for non-human labels). delta
/// is the mismatch ratio in [0,1] and is absent when s_count is zero.
struct LabelMetricResult {
  std::uint16_t label = 0;
  std::uint64_t s_count = 0;
  std::uint64_t e_count = 0;
  std::uint64_t eh_count = 0;
  std::optional<double> delta;
};

struct MetricConfig {
  double alpha = 1.0;
  std::vector<std::uint16_t> human_labels = {kPersonLabel};

  bool is_human(std::uint16_t label) const {
    for (std::uint16_t h : human_labels) {
      if (h == label) return true;
    }
    return false;
  }
};

/// The mismatch ratio from the raw counts: e/s for plain labels and
/// (e + alpha*eh) / (s + alpha*eh) for human ones. Absent when s is zero.
/// Every delta reported by this library comes through here.
std::optional<double> delta_value(std::uint64_t s_count, std::uint64_t e_count,
                                  std::uint64_t eh_count, bool human,
                                  double alpha);

/// Compose the directed match: pair i is (reference.labels[i],
/// degraded.labels[map.target_index[i]]). Throws LengthMismatch when the map
/// does not line up with the clouds.
std::vector<LabelPair> pair_labels(const LabeledCloud& reference,
                                   const LabeledCloud& degraded,
                                   const NnMap& map);

/// Plain per-label metric over an explicit pair list.
LabelMetricResult delta(std::span<const LabelPair> pairs, std::uint16_t label);

/// Human-weighted per-label metric. alpha = 0 reduces exactly to delta().
/// Throws NegativeAlpha.
LabelMetricResult delta_human(std::span<const LabelPair> pairs,
                              std::uint16_t human_label, double alpha);

/// One-pass accumulation over a pair list: one result per distinct label
/// appearing on either side, sorted by label id.
std::vector<LabelMetricResult> evaluate_labels(std::span<const LabelPair> pairs,
                                               const MetricConfig& config);

/// Recompute every delta from the stored counts under a new alpha. Counts
/// are alpha-independent, so an alpha sweep only needs this step. The
/// config's human label set must match the one used at evaluation time;
/// eh_count is only tracked for labels that were human then.
void rescore(std::vector<LabelMetricResult>& results,
             const MetricConfig& config);

/// Full pipeline for one scan pair: nearest_map (reference -> degraded),
/// pair_labels, then evaluate_labels. Throws EmptyCloud.
std::vector<LabelMetricResult> evaluate_pair(const ScanPair& pair,
                                             const MetricConfig& config,
                                             unsigned jobs = 1);

}  // namespace segdelta
