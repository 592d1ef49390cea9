// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace segdelta {

/// One MPEG CTC rate point: quantization scale plus the reference G-PCC and
/// L3C2 throughputs in MB/s (decimal megabytes at 10 fps).
struct RatePreset {
  std::string_view name;
  double qs;
  double gpcc_mb_s;
  double l3c2_mb_s;
};

/// The seven rate points, ordered from heaviest compression (R01) to none.
std::span<const RatePreset> preset_table();

/// Case-insensitive lookup; nullptr when the name is unknown.
const RatePreset* find_preset(std::string_view name);

struct RateReport {
  std::uint64_t total_bytes = 0;
  std::uint64_t frame_count = 0;
  double fps = 10.0;
  double throughput_mb_s = 0.0;
};

/// throughput_mb_s = total_bytes * fps / (frame_count * 1e6). MB is decimal
/// (1e6 bytes). Throws ZeroFrames when frame_count is 0 and InvalidArgument
/// when fps is not positive.
RateReport throughput(std::uint64_t total_bytes, std::uint64_t frame_count,
                      double fps = 10.0);

}  // namespace segdelta
