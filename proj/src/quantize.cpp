// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/quantize.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "segdelta/error.hpp"
#include "segdelta/spatial_index.hpp"

namespace segdelta {

namespace {

struct Cell {
  std::int64_t x, y, z;
  bool operator==(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {std::uint64_t(c.x), std::uint64_t(c.y),
                            std::uint64_t(c.z)}) {
      h = (h ^ v) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t quantize_coord(float c, double qs) {
  const double scaled = double(c) * qs;
  if (std::abs(scaled) >= 9.0e18) {
    throw Error(ErrorCode::InvalidArgument,
                "quantized coordinate overflows: " + std::to_string(scaled));
  }
  return std::llround(scaled);  // halves away from zero
}

}  // namespace

LabeledCloud quantize_geometry(const LabeledCloud& cloud,
                               const QuantizeConfig& config) {
  if (!(config.qs > 0.0) || !std::isfinite(config.qs)) {
    throw Error(ErrorCode::InvalidQs,
                "qs must be positive and finite, got " +
                    std::to_string(config.qs));
  }

  LabeledCloud out;
  out.reserve(cloud.size());
  std::unordered_map<Cell, std::uint32_t, CellHash> seen;
  if (config.merge_duplicates) seen.reserve(cloud.size());

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.positions[i];
    const Cell cell{quantize_coord(p[0], config.qs),
                    quantize_coord(p[1], config.qs),
                    quantize_coord(p[2], config.qs)};
    if (config.merge_duplicates &&
        !seen.emplace(cell, std::uint32_t(out.size())).second) {
      continue;  // cell already represented by an earlier point
    }
    Point3 q;
    if (config.dequantize) {
      q = {float(double(cell.x) / config.qs), float(double(cell.y) / config.qs),
           float(double(cell.z) / config.qs)};
    } else {
      q = {float(cell.x), float(cell.y), float(cell.z)};
    }
    out.push_back(q, cloud.reflectance[i], cloud.labels[i],
                  cloud.instance_ids[i]);
  }
  return out;
}

LabeledCloud oracle_segment(const LabeledCloud& degraded_geometry,
                            const LabeledCloud& reference, unsigned jobs) {
  if (degraded_geometry.empty()) {
    throw Error(ErrorCode::EmptyCloud, "degraded cloud is empty");
  }
  if (reference.empty()) {
    throw Error(ErrorCode::EmptyCloud, "reference cloud is empty");
  }
  const SpatialIndex index(reference.positions);
  const NnMap map = nearest_map(degraded_geometry.positions, index, jobs);

  LabeledCloud out = degraded_geometry;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.labels[i] = reference.labels[map.target_index[i]];
    out.instance_ids[i] = reference.instance_ids[map.target_index[i]];
  }
  return out;
}

}  // namespace segdelta
