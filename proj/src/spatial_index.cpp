// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "segdelta/error.hpp"

namespace segdelta {

SpatialIndex::SpatialIndex(std::span<const Point3> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) {
    throw Error(ErrorCode::EmptyCloud, "cannot index an empty point set");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const std::uint32_t node_id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= kLeafSize) {
    nodes_[node_id].axis = -1;
    nodes_[node_id].lo = begin;
    nodes_[node_id].hi = end;
    return node_id;
  }

  // Split the widest extent of the node's bounding box at the median point.
  float mins[3], maxs[3];
  for (int a = 0; a < 3; ++a) {
    mins[a] = std::numeric_limits<float>::max();
    maxs[a] = std::numeric_limits<float>::lowest();
  }
  for (std::uint32_t i = begin; i < end; ++i) {
    const Point3& p = points_[order_[i]];
    for (int a = 0; a < 3; ++a) {
      mins[a] = std::min(mins[a], p[a]);
      maxs[a] = std::max(maxs[a], p[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (maxs[a] - mins[a] > maxs[axis] - mins[axis]) axis = a;
  }

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t lhs, std::uint32_t rhs) {
                     const float cl = points_[lhs][axis];
                     const float cr = points_[rhs][axis];
                     if (cl != cr) return cl < cr;
                     return lhs < rhs;  // stable under equal coordinates
                   });

  nodes_[node_id].axis = static_cast<std::int8_t>(axis);
  nodes_[node_id].split = points_[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  nodes_[node_id].lo = left;
  nodes_[node_id].hi = right;
  return node_id;
}

void SpatialIndex::search(std::uint32_t node_id, const Point3& query,
                          Neighbor& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::uint32_t i = node.lo; i < node.hi; ++i) {
      const std::uint32_t idx = order_[i];
      const double d2 = squared_distance(points_[idx], query);
      if (d2 < best.squared_distance ||
          (d2 == best.squared_distance && idx < best.index)) {
        best.index = idx;
        best.squared_distance = d2;
      }
    }
    return;
  }

  const double diff = double(query[node.axis]) - double(node.split);
  const std::uint32_t near = diff <= 0.0 ? node.lo : node.hi;
  const std::uint32_t far = diff <= 0.0 ? node.hi : node.lo;
  search(near, query, best);
  // Points at exactly the plane distance may still win the tie, so the far
  // side is pruned only when strictly worse.
  if (diff * diff <= best.squared_distance) {
    search(far, query, best);
  }
}

SpatialIndex::Neighbor SpatialIndex::nearest(const Point3& query) const {
  Neighbor best{std::numeric_limits<std::uint32_t>::max(),
                std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

NnMap nearest_map(std::span<const Point3> reference, const SpatialIndex& index,
                  unsigned jobs) {
  NnMap map;
  const std::size_t n = reference.size();
  map.target_index.resize(n);
  map.distance.resize(n);

  const auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const SpatialIndex::Neighbor nb = index.nearest(reference[i]);
      map.target_index[i] = nb.index;
      map.distance[i] = std::sqrt(nb.squared_distance);
    }
  };

  if (jobs <= 1 || n < 2048) {
    run(0, n);
    return map;
  }

  const std::size_t workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back(run, lo, hi);
  }
  for (auto& t : threads) t.join();
  return map;
}

NnMap brute_force_nearest(std::span<const Point3> reference,
                          std::span<const Point3> degraded) {
  if (degraded.empty()) {
    throw Error(ErrorCode::EmptyCloud, "degraded cloud is empty");
  }
  NnMap map;
  map.target_index.resize(reference.size());
  map.distance.resize(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    std::uint32_t best_idx = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < degraded.size(); ++j) {
      const double dx = double(reference[i][0]) - double(degraded[j][0]);
      const double dy = double(reference[i][1]) - double(degraded[j][1]);
      const double dz = double(reference[i][2]) - double(degraded[j][2]);
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_idx = static_cast<std::uint32_t>(j);
      }
    }
    map.target_index[i] = best_idx;
    map.distance[i] = std::sqrt(best_d2);
  }
  return map;
}

}  // namespace segdelta
