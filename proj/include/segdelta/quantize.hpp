// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "segdelta/cloud.hpp"

namespace segdelta {

/// Uniform geometry quantization: each coordinate becomes round(c * qs),
/// halves away from zero. With dequantize the integers are divided back by
/// qs to return to meters. With merge_duplicates points sharing a quantized
/// cell collapse to the first occurrence (lowest original index).
struct QuantizeConfig {
  double qs = 1.0;
  bool merge_duplicates = true;
  bool dequantize = true;
};

/// Throws InvalidQs when qs is not a positive finite value. Reflectance,
/// labels and instance ids ride along untouched (up to merging).
LabeledCloud quantize_geometry(const LabeledCloud& cloud,
                               const QuantizeConfig& config);

/// Label transfer standing in for a segmenter that is perfect up to geometric
/// displacement: every degraded point takes the label (and instance id) of
/// its nearest reference point, same tie rule as SpatialIndex. Geometry and
/// reflectance pass through unchanged. Throws EmptyCloud.
LabeledCloud oracle_segment(const LabeledCloud& degraded_geometry,
                            const LabeledCloud& reference, unsigned jobs = 1);

}  // namespace segdelta
