// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/kitti_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "segdelta/error.hpp"

namespace segdelta::kitti {

namespace {

constexpr std::size_t kPointRecordBytes = 16;  // x, y, z, reflectance
constexpr std::size_t kLabelRecordBytes = 4;

std::uint32_t read_u32le(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void write_u32le(std::uint32_t w, unsigned char* p) {
  p[0] = static_cast<unsigned char>(w & 0xff);
  p[1] = static_cast<unsigned char>((w >> 8) & 0xff);
  p[2] = static_cast<unsigned char>((w >> 16) & 0xff);
  p[3] = static_cast<unsigned char>((w >> 24) & 0xff);
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in.is_open()) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
  if (size > 0 &&
      !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw Error(ErrorCode::Io, "failed to read " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "failed to write " + path.string());
  }
}

}  // namespace

LabeledCloud load_scan(const std::filesystem::path& scan_path,
                       const std::optional<std::filesystem::path>& label_path) {
  const std::vector<unsigned char> bytes = read_file(scan_path);
  if (bytes.size() % kPointRecordBytes != 0) {
    throw Error(ErrorCode::MalformedScan,
                scan_path.string() + " has " + std::to_string(bytes.size()) +
                    " bytes, not a multiple of 16");
  }
  const std::size_t n = bytes.size() / kPointRecordBytes;

  LabeledCloud cloud;
  cloud.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* rec = bytes.data() + i * kPointRecordBytes;
    Point3& p = cloud.positions[i];
    for (int axis = 0; axis < 3; ++axis) {
      p[axis] = std::bit_cast<float>(read_u32le(rec + 4 * axis));
      if (!std::isfinite(p[axis])) {
        throw Error(ErrorCode::MalformedScan,
                    scan_path.string() + ": non-finite coordinate at point " +
                        std::to_string(i));
      }
    }
    cloud.reflectance[i] = std::bit_cast<float>(read_u32le(rec + 12));
  }

  if (label_path) {
    const std::vector<unsigned char> label_bytes = read_file(*label_path);
    if (label_bytes.size() % kLabelRecordBytes != 0) {
      throw Error(ErrorCode::MalformedScan,
                  label_path->string() + " has " +
                      std::to_string(label_bytes.size()) +
                      " bytes, not a multiple of 4");
    }
    const std::size_t label_count = label_bytes.size() / kLabelRecordBytes;
    if (label_count != n) {
      throw Error(ErrorCode::LabelCountMismatch,
                  label_path->string() + " has " + std::to_string(label_count) +
                      " records for " + std::to_string(n) + " points in " +
                      scan_path.string());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t word =
          read_u32le(label_bytes.data() + i * kLabelRecordBytes);
      cloud.labels[i] = static_cast<std::uint16_t>(word & 0xffffu);
      cloud.instance_ids[i] = static_cast<std::uint16_t>(word >> 16);
    }
  }
  return cloud;
}

void save_scan(const LabeledCloud& cloud, const std::filesystem::path& scan_path,
               const std::optional<std::filesystem::path>& label_path) {
  const std::size_t n = cloud.size();
  std::vector<unsigned char> bytes(n * kPointRecordBytes);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char* rec = bytes.data() + i * kPointRecordBytes;
    for (int axis = 0; axis < 3; ++axis) {
      write_u32le(std::bit_cast<std::uint32_t>(cloud.positions[i][axis]),
                  rec + 4 * axis);
    }
    write_u32le(std::bit_cast<std::uint32_t>(cloud.reflectance[i]), rec + 12);
  }
  write_file(scan_path, bytes);

  if (label_path) {
    std::vector<unsigned char> label_bytes(n * kLabelRecordBytes);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t word =
          (std::uint32_t(cloud.instance_ids[i]) << 16) |
          std::uint32_t(cloud.labels[i]);
      write_u32le(word, label_bytes.data() + i * kLabelRecordBytes);
    }
    write_file(*label_path, label_bytes);
  }
}

std::vector<SequenceEntry> enumerate_sequence(
    const std::filesystem::path& dir, std::optional<std::size_t> limit) {
  namespace fs = std::filesystem;
  const fs::path velodyne = dir / "velodyne";
  const fs::path labels = dir / "labels";
  std::error_code ec;
  if (!fs::is_directory(velodyne, ec)) {
    throw Error(ErrorCode::Io, velodyne.string() + " is not a directory");
  }

  std::vector<fs::path> scans;
  for (const auto& entry : fs::directory_iterator(velodyne)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") {
      scans.push_back(entry.path());
    }
  }
  std::sort(scans.begin(), scans.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });

  std::vector<SequenceEntry> entries;
  entries.reserve(scans.size());
  for (const auto& scan : scans) {
    if (limit && entries.size() >= *limit) break;
    SequenceEntry entry{scan, std::nullopt};
    const fs::path label = labels / (scan.stem().string() + ".label");
    if (fs::is_regular_file(label, ec)) {
      entry.label_path = label;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace segdelta::kitti
