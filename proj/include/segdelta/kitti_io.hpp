// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "segdelta/cloud.hpp"

namespace segdelta::kitti {

/// One scan of a sequence directory: the velodyne file and, when present,
/// the label file sharing its stem.
struct SequenceEntry {
  std::filesystem::path scan_path;
  std::optional<std::filesystem::path> label_path;
};

/**
 * Load a Semantic KITTI scan (.bin) and optional label file (.label).
 *
 * Scan format: N * [x, y, z, reflectance], little-endian 32-bit floats.
 * Label format: N * little-endian uint32, low 16 bits semantic class,
 * high 16 bits instance id.
 *
 * Without a label file, labels and instance ids are all zero (unlabeled).
 * Throws MalformedScan on a bad byte length or a non-finite coordinate,
 * LabelCountMismatch when the label record count differs from the point
 * count, and Io on unreadable files.
 */
LabeledCloud load_scan(
    const std::filesystem::path& scan_path,
    const std::optional<std::filesystem::path>& label_path = std::nullopt);

/// Inverse of load_scan, bit-exact: float bit patterns and label words are
/// preserved across a save/load round trip. Labels are written only when
/// label_path is given.
void save_scan(
    const LabeledCloud& cloud, const std::filesystem::path& scan_path,
    const std::optional<std::filesystem::path>& label_path = std::nullopt);

/// Pair `<dir>/velodyne/*.bin` with `<dir>/labels/*.label` by shared stem,
/// sorted lexicographically by filename. Scans without a label file get an
/// empty label_path. Truncates to `limit` entries when given.
std::vector<SequenceEntry> enumerate_sequence(
    const std::filesystem::path& dir,
    std::optional<std::size_t> limit = std::nullopt);

}  // namespace segdelta::kitti
