// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/rate.hpp"

#include <cctype>
#include <cmath>

#include "segdelta/error.hpp"

namespace segdelta {

namespace {

constexpr RatePreset kPresets[] = {
    {"R01", 0.0019, 0.0408, 0.1661},
    {"R02", 0.0039, 0.1102, 0.4125},
    {"R03", 0.0160, 0.5729, 1.7662},
    {"R04", 0.0310, 1.0965, 2.7951},
    {"R05", 0.1300, 2.2189, 4.2298},
    {"R06", 0.2500, 2.8484, 4.8205},
    {"NoCompression", 1.0000, 28.7465, 28.7465},
};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::span<const RatePreset> preset_table() { return kPresets; }

const RatePreset* find_preset(std::string_view name) {
  for (const RatePreset& preset : kPresets) {
    if (iequals(preset.name, name)) return &preset;
  }
  return nullptr;
}

RateReport throughput(std::uint64_t total_bytes, std::uint64_t frame_count,
                      double fps) {
  if (frame_count == 0) {
    throw Error(ErrorCode::ZeroFrames, "frame_count must be positive");
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw Error(ErrorCode::InvalidArgument,
                "fps must be positive and finite, got " + std::to_string(fps));
  }
  RateReport report;
  report.total_bytes = total_bytes;
  report.frame_count = frame_count;
  report.fps = fps;
  report.throughput_mb_s =
      double(total_bytes) * fps / (double(frame_count) * 1e6);
  return report;
}

}  // namespace segdelta
