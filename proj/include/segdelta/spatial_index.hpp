// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "segdelta/cloud.hpp"

namespace segdelta {

/// Directed nearest-neighbor assignment: reference point i maps to degraded
/// point target_index[i] at Euclidean distance[i] (meters). Among equidistant
/// candidates the smallest target index wins.
struct NnMap {
  std::vector<std::uint32_t> target_index;
  std::vector<double> distance;

  std::size_t size() const { return target_index.size(); }
};

/// Squared Euclidean distance, accumulated in double so comparisons are
/// reproducible regardless of summation context.
inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = double(a[0]) - double(b[0]);
  const double dy = double(a[1]) - double(b[1]);
  const double dz = double(a[2]) - double(b[2]);
  return dx * dx + dy * dy + dz * dz;
}

/**
 * Exact nearest-neighbor k-d tree over an immutable point set.
 *
 * Queries compare squared distances in double precision and take no square
 * root before the argmin, so ties are detected exactly and broken toward the
 * smallest point index. The structure is safe for concurrent queries once
 * built. Construction throws EmptyCloud for an empty input.
 */
class SpatialIndex {
 public:
  struct Neighbor {
    std::uint32_t index;
    double squared_distance;
  };

  explicit SpatialIndex(std::span<const Point3> points);

  std::size_t size() const { return points_.size(); }

  Neighbor nearest(const Point3& query) const;

 private:
  static constexpr std::uint32_t kLeafSize = 16;

  struct Node {
    float split = 0.0f;      // splitting coordinate (internal nodes)
    std::int8_t axis = -1;   // -1 marks a leaf
    std::uint32_t lo = 0;    // internal: left child; leaf: range begin
    std::uint32_t hi = 0;    // internal: right child; leaf: range end
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node_id, const Point3& query, Neighbor& best) const;

  std::vector<Point3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

/// Resolve every reference point to its nearest degraded point. With jobs > 1
/// the reference range is split across threads; the output is bitwise
/// identical to the sequential result.
NnMap nearest_map(std::span<const Point3> reference, const SpatialIndex& index,
                  unsigned jobs = 1);

/// Exhaustive O(|reference| * |degraded|) nearest-neighbor scan with the same
/// tie rule. This is the ground truth the indexed path must equal; it shares
/// no search code with SpatialIndex.
NnMap brute_force_nearest(std::span<const Point3> reference,
                          std::span<const Point3> degraded);

}  // namespace segdelta
