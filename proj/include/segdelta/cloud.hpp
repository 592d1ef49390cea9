// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace segdelta {

using Point3 = std::array<float, 3>;

/// Index-aligned point cloud: positions in meters, sensor reflectance, and
/// the Semantic KITTI label pair (semantic class, instance id) per point.
/// All four arrays always have the same length.
struct LabeledCloud {
  std::vector<Point3> positions;
  std::vector<float> reflectance;
  std::vector<std::uint16_t> labels;
  std::vector<std::uint16_t> instance_ids;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void reserve(std::size_t n) {
    positions.reserve(n);
    reflectance.reserve(n);
    labels.reserve(n);
    instance_ids.reserve(n);
  }

  void resize(std::size_t n) {
    positions.resize(n);
    reflectance.resize(n, 0.0f);
    labels.resize(n, 0);
    instance_ids.resize(n, 0);
  }

  void push_back(const Point3& p, float refl, std::uint16_t label,
                 std::uint16_t instance_id) {
    positions.push_back(p);
    reflectance.push_back(refl);
    labels.push_back(label);
    instance_ids.push_back(instance_id);
  }
};

/// The uncompressed cloud and the degraded (decompressed, re-segmented)
/// cloud it is judged against. The metric runs reference -> degraded only.
struct ScanPair {
  LabeledCloud reference;
  LabeledCloud degraded;
};

}  // namespace segdelta
