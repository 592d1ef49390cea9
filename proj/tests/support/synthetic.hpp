// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic cloud generators shared by the test binaries.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "segdelta/cloud.hpp"

namespace segdelta::testing {

// Uniform box cloud with labels drawn from `labels`.
inline LabeledCloud random_cloud(std::size_t n, std::uint32_t seed,
                                 const std::vector<std::uint16_t>& labels,
                                 float extent = 50.0f) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> coord(-extent, extent);
  std::uniform_real_distribution<float> refl(0.0f, 1.0f);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  LabeledCloud cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.push_back({coord(rng), coord(rng), coord(rng)}, refl(rng),
                    labels[pick(rng)], 0);
  }
  return cloud;
}

// Gaussian blobs around a handful of centers; stresses unbalanced kd-tree
// splits much harder than the uniform generator.
inline LabeledCloud clustered_cloud(std::size_t n, std::uint32_t seed,
                                    const std::vector<std::uint16_t>& labels,
                                    float extent = 50.0f) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> center(-extent, extent);
  std::uniform_int_distribution<int> n_clusters(1, 8);
  std::normal_distribution<float> spread(0.0f, extent / 40.0f);
  std::uniform_real_distribution<float> refl(0.0f, 1.0f);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);

  const int k = n_clusters(rng);
  std::vector<Point3> centers(static_cast<std::size_t>(k));
  for (Point3& c : centers) c = {center(rng), center(rng), center(rng)};
  std::uniform_int_distribution<std::size_t> which(0, centers.size() - 1);

  LabeledCloud cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& c = centers[which(rng)];
    cloud.push_back({c[0] + spread(rng), c[1] + spread(rng), c[2] + spread(rng)},
                    refl(rng), labels[pick(rng)], 0);
  }
  return cloud;
}

// Jitters every coordinate by at most `radius`; a stand-in for geometry
// degradation that keeps point count and labels.
inline LabeledCloud jitter_cloud(const LabeledCloud& cloud, std::uint32_t seed,
                                 float radius) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(-radius, radius);
  LabeledCloud out = cloud;
  for (Point3& p : out.positions) {
    p[0] += d(rng);
    p[1] += d(rng);
    p[2] += d(rng);
  }
  return out;
}

// Street scene on an integer lattice, roughly 48k points. Integer
// coordinates make qs = 1.0 an exact identity, so the NoCompression rate
// point must score zero distortion. Class ids follow the Semantic KITTI
// numbering (10 car, 30 person, 40 road, 48 sidewalk, 50 building,
// 70 vegetation, 72 terrain, 80 pole).
inline LabeledCloud street_scene() {
  LabeledCloud cloud;
  cloud.reserve(48000);
  const auto add = [&](int x, int y, int z, std::uint16_t label,
                       std::uint16_t instance = 0) {
    cloud.push_back({float(x), float(y), float(z)}, 0.5f, label, instance);
  };

  for (int x = -160; x <= 159; ++x) {
    for (int y = -6; y <= 5; ++y) add(x, y, 0, 40);        // road
    for (int y = -10; y <= -7; ++y) add(x, y, 0, 48);      // sidewalk
    for (int y = 6; y <= 9; ++y) add(x, y, 0, 48);
    for (int y = -20; y <= -11; ++y) add(x, y, 0, 72);     // terrain
    for (int y = 10; y <= 19; ++y) add(x, y, 0, 72);
    for (int y = -26; y <= -21; ++y)                       // building block
      for (int z = 0; z <= 11; ++z) add(x, y, z, 50);
    for (int y = 20; y <= 25; ++y)                         // hedge row
      for (int z = 0; z <= 5; ++z) add(x, y, z, 70);
  }
  for (int k = 0; k < 10; ++k) {                           // parked cars
    const int x0 = -150 + 30 * k;
    for (int x = x0; x < x0 + 5; ++x)
      for (int y = -3; y <= -1; ++y)
        for (int z = 1; z <= 2; ++z)
          add(x, y, z, 10, std::uint16_t(k + 1));
  }
  for (int k = 0; k < 40; ++k) {                           // pedestrians
    const int x = -156 + 8 * k;
    for (int z = 1; z <= 2; ++z) add(x, 7, z, 30, std::uint16_t(k + 1));
  }
  for (int k = 0; k < 16; ++k) {                           // poles
    const int x = -160 + 20 * k;
    for (int z = 1; z <= 6; ++z) add(x, -8, z, 80);
  }
  return cloud;
}

}  // namespace segdelta::testing
