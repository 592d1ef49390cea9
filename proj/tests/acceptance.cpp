// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate for the whole artifact. Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any of them fail.
// SEGDELTA_CLI_PATH is injected by the build.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "segdelta/error.hpp"
#include "segdelta/kitti_io.hpp"
#include "segdelta/metric.hpp"
#include "segdelta/quantize.hpp"
#include "segdelta/rate.hpp"
#include "segdelta/report.hpp"
#include "segdelta/spatial_index.hpp"
#include "support/process.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace segdelta;
using segdelta::testing::TempDir;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

// --- 1: exact values on the hand-enumerable fixtures --------------------

void metric_hand_examples(Check& check) {
  const std::vector<LabelPair> plain = {{40, 48}, {40, 48}, {48, 48}};
  check.expect(delta(plain, 40).delta.value() == 1.0, "delta(40) != 1");
  check.expect(delta(plain, 48).delta.value() == 2.0 / 3.0,
               "delta(48) != 2/3");

  const std::vector<LabelPair> human = {{30, 40}, {30, 30}, {40, 30}};
  check.expect(delta_human(human, 30, 1.0).delta.value() == 0.75,
               "human delta at alpha 1 != 3/4");
  check.expect(delta_human(human, 30, 0.0).delta.value() == 2.0 / 3.0,
               "human delta at alpha 0 != 2/3");
  check.expect(delta_human(human, 30, 0.0).delta.value() ==
                   delta(human, 30).delta.value(),
               "alpha 0 is not the plain metric");
}

// --- 2: accelerated pipeline equals brute force --------------------------

void oracle_equivalence(Check& check) {
  const std::vector<std::uint16_t> classes = {10, 30, 40, 48, 50};
  std::mt19937 rng(20260813);
  std::uniform_int_distribution<std::size_t> size(1, 2000);
  MetricConfig config;

  for (int round = 0; round < 200 && check.ok; ++round) {
    const std::size_t n_ref = size(rng);
    const std::size_t n_deg = size(rng);
    const bool clustered = (round % 2) == 1;
    const LabeledCloud ref =
        clustered ? testing::clustered_cloud(n_ref, 1000 + round, classes)
                  : testing::random_cloud(n_ref, 1000 + round, classes);
    const LabeledCloud deg =
        clustered ? testing::clustered_cloud(n_deg, 3000 + round, classes)
                  : testing::random_cloud(n_deg, 3000 + round, classes);

    const std::vector<LabelMetricResult> fast =
        evaluate_pair({ref, deg}, config);
    const NnMap map = brute_force_nearest(ref.positions, deg.positions);
    const std::vector<LabelMetricResult> slow =
        evaluate_labels(pair_labels(ref, deg, map), config);

    check.expect(fast.size() == slow.size(), "label set differs");
    for (std::size_t i = 0; i < fast.size() && check.ok; ++i) {
      check.expect(fast[i].label == slow[i].label, "label id differs");
      check.expect(fast[i].s_count == slow[i].s_count, "s differs");
      check.expect(fast[i].e_count == slow[i].e_count, "e differs");
      check.expect(fast[i].eh_count == slow[i].eh_count, "eh differs");
      check.expect(fast[i].delta == slow[i].delta, "delta differs");
    }
  }
}

// --- 3: identity and range ------------------------------------------------

void identity_and_range(Check& check) {
  const std::vector<std::uint16_t> classes = {10, 30, 40, 48, 50, 70};
  MetricConfig config;

  for (std::uint32_t seed = 0; seed < 100 && check.ok; ++seed) {
    const std::size_t n = 50 + std::size_t(seed) * 13;
    const LabeledCloud cloud =
        (seed % 2) ? testing::clustered_cloud(n, 5000 + seed, classes)
                   : testing::random_cloud(n, 5000 + seed, classes);
    for (const LabelMetricResult& r : evaluate_pair({cloud, cloud}, config)) {
      check.expect(r.delta.has_value() && *r.delta == 0.0,
                   "self-comparison delta is not 0");
    }

    const LabeledCloud moved = testing::jitter_cloud(cloud, 8000 + seed, 1.5f);
    for (const LabelMetricResult& r : evaluate_pair({cloud, moved}, config)) {
      check.expect(r.delta.has_value(), "occurring label lost its delta");
      check.expect(*r.delta >= 0.0 && *r.delta <= 1.0, "delta out of [0,1]");
    }
  }

  const std::vector<LabelPair> pairs = {{40, 40}};
  check.expect(!delta(pairs, 99).delta.has_value(),
               "unseen label should have no delta");
  check.expect(delta(pairs, 99).s_count == 0, "unseen label has s > 0");
}

// --- 4: behavior in alpha --------------------------------------------------

void alpha_behavior(Check& check) {
  const double alphas[] = {0.0, 0.5, 1.0, 2.0, 10.0};

  // eh > 0 and e < s: strictly increasing
  const std::vector<LabelPair> escaping = {{30, 40}, {30, 30}, {30, 30}};
  double previous = -1.0;
  for (double alpha : alphas) {
    const double value = delta_human(escaping, 30, alpha).delta.value();
    check.expect(value > previous, "not strictly increasing in alpha");
    previous = value;
  }

  // eh = 0: constant
  const std::vector<LabelPair> contained = {{40, 30}, {30, 30}};
  for (double alpha : alphas) {
    check.expect(delta_human(contained, 30, alpha).delta.value() == 0.5,
                 "constant fixture moved with alpha");
  }

  // alpha 0 equals the plain metric on both fixtures
  for (const auto& pairs : {escaping, contained}) {
    check.expect(delta_human(pairs, 30, 0.0).delta.value() ==
                     delta(pairs, 30).delta.value(),
                 "alpha 0 differs from the plain metric");
  }
}

// --- 5: rate ladder fidelity ------------------------------------------------

void rate_ladder(Check& check) {
  struct Row {
    const char* name;
    double qs, gpcc, l3c2;
  };
  const Row expected[] = {
      {"R01", 0.0019, 0.0408, 0.1661}, {"R02", 0.0039, 0.1102, 0.4125},
      {"R03", 0.0160, 0.5729, 1.7662}, {"R04", 0.0310, 1.0965, 2.7951},
      {"R05", 0.1300, 2.2189, 4.2298}, {"R06", 0.2500, 2.8484, 4.8205},
      {"NoCompression", 1.0000, 28.7465, 28.7465},
  };
  const auto table = preset_table();
  check.expect(table.size() == 7, "preset count != 7");
  for (std::size_t i = 0; i < table.size() && check.ok; ++i) {
    check.expect(table[i].name == expected[i].name, "preset name differs");
    check.expect(table[i].qs == expected[i].qs, "preset qs differs");
    check.expect(table[i].gpcc_mb_s == expected[i].gpcc,
                 "preset gpcc throughput differs");
    check.expect(table[i].l3c2_mb_s == expected[i].l3c2,
                 "preset l3c2 throughput differs");
  }
  check.expect(throughput(1000000, 10, 10.0).throughput_mb_s == 1.0,
               "1e6 bytes over 10 frames at 10 fps != 1 MB/s");
}

// --- 6: quantizer contract ---------------------------------------------------

void quantizer_contract(Check& check) {
  const std::vector<std::uint16_t> classes = {1};
  const LabeledCloud cloud = testing::random_cloud(100000, 271828, classes);
  for (const RatePreset& preset : preset_table()) {
    QuantizeConfig config;
    config.qs = preset.qs;
    config.merge_duplicates = false;
    const LabeledCloud out = quantize_geometry(cloud, config);
    double worst = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (int axis = 0; axis < 3; ++axis) {
        worst = std::max(worst, std::abs(double(out.positions[i][axis]) -
                                         double(cloud.positions[i][axis])));
      }
    }
    check.expect(worst <= 0.5 / preset.qs + 1e-3,
                 std::string("error bound broken at ") +
                     std::string(preset.name));
  }

  const LabeledCloud scene = testing::street_scene();
  QuantizeConfig identity;
  identity.qs = 1.0;
  const LabeledCloud same = quantize_geometry(scene, identity);
  check.expect(same.size() == scene.size(), "identity changed the size");
  for (std::size_t i = 0; i < same.size() && check.ok; ++i) {
    check.expect(same.positions[i] == scene.positions[i],
                 "identity moved a point");
  }

  std::size_t previous = 0;
  for (const RatePreset& preset : preset_table()) {
    QuantizeConfig config;
    config.qs = preset.qs;
    const std::size_t merged = quantize_geometry(scene, config).size();
    check.expect(merged >= previous, "merged size not monotone in qs");
    previous = merged;
  }
}

// --- 7: end-to-end rate-distortion trend -------------------------------------

double mean_label_delta(const std::vector<LabelMetricResult>& results,
                        Check& check) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const LabelMetricResult& r : results) {
    if (!r.delta) continue;
    sum += *r.delta;
    ++count;
  }
  check.expect(count > 0, "no label deltas at all");
  return count > 0 ? sum / double(count) : 0.0;
}

void rd_trend(Check& check) {
  const LabeledCloud scene = testing::street_scene();
  MetricConfig config;

  std::vector<double> means;
  for (const RatePreset& preset : preset_table()) {
    QuantizeConfig qc;
    qc.qs = preset.qs;
    const LabeledCloud quantized = quantize_geometry(scene, qc);
    const LabeledCloud segmented = oracle_segment(quantized, scene);
    const std::vector<LabelMetricResult> results =
        evaluate_pair({scene, segmented}, config);
    means.push_back(mean_label_delta(results, check));

    if (preset.qs == 1.0) {
      for (const LabelMetricResult& r : results) {
        check.expect(r.delta.value() == 0.0,
                     "NoCompression distorted label " +
                         std::to_string(r.label));
      }
    }
  }

  for (std::size_t i = 1; i < means.size(); ++i) {
    check.expect(means[i] <= means[i - 1] + 1e-9,
                 "mean delta increased from " +
                     std::string(preset_table()[i - 1].name) + " to " +
                     std::string(preset_table()[i].name));
  }
  check.expect(means.front() > means[5], "R01 not above R06");
  check.expect(means.back() == 0.0, "NoCompression mean is not 0");
}

// --- 8: scan and label file fidelity -----------------------------------------

void io_fidelity(Check& check) {
  TempDir dir("acceptance-io");
  const std::vector<std::uint16_t> classes = {0, 10, 30, 40, 48, 255};

  for (std::uint32_t seed = 0; seed < 50 && check.ok; ++seed) {
    const std::size_t n = seed == 0 ? 0 : (seed == 1 ? 1 : seed * 11);
    LabeledCloud cloud = testing::random_cloud(n, 600 + seed, classes);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      cloud.instance_ids[i] = std::uint16_t(i);
    }
    const auto scan = dir / ("r" + std::to_string(seed) + ".bin");
    const auto label = dir / ("r" + std::to_string(seed) + ".label");
    kitti::save_scan(cloud, scan, label);
    const LabeledCloud loaded = kitti::load_scan(scan, label);

    check.expect(loaded.size() == cloud.size(), "size changed in transit");
    for (std::size_t i = 0; i < cloud.size() && check.ok; ++i) {
      for (int axis = 0; axis < 3; ++axis) {
        check.expect(std::bit_cast<std::uint32_t>(loaded.positions[i][axis]) ==
                         std::bit_cast<std::uint32_t>(cloud.positions[i][axis]),
                     "coordinate bits changed");
      }
      check.expect(std::bit_cast<std::uint32_t>(loaded.reflectance[i]) ==
                       std::bit_cast<std::uint32_t>(cloud.reflectance[i]),
                   "reflectance bits changed");
      check.expect(loaded.labels[i] == cloud.labels[i], "label changed");
      check.expect(loaded.instance_ids[i] == cloud.instance_ids[i],
                   "instance id changed");
    }
  }

  const auto code_of = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::EmptyInput;
  };
  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad.write("0123456789", 10);
  }
  check.expect(code_of([&] { kitti::load_scan(dir / "bad.bin"); }) ==
                   ErrorCode::MalformedScan,
               "10-byte scan not MalformedScan");
  {
    std::ofstream bad(dir / "bad.label", std::ios::binary);
    bad.write("012", 3);
  }
  const LabeledCloud one = testing::random_cloud(1, 1, classes);
  kitti::save_scan(one, dir / "one.bin");
  check.expect(code_of([&] {
                 kitti::load_scan(dir / "one.bin", dir / "bad.label");
               }) == ErrorCode::MalformedScan,
               "3-byte label file not MalformedScan");
  {
    std::ofstream two(dir / "two.label", std::ios::binary);
    const std::uint32_t words[2] = {40, 40};
    two.write(reinterpret_cast<const char*>(words), 8);
  }
  check.expect(code_of([&] {
                 kitti::load_scan(dir / "one.bin", dir / "two.label");
               }) == ErrorCode::LabelCountMismatch,
               "2 labels for 1 point not LabelCountMismatch");
}

// --- 9: bitwise determinism across parallelism degrees ------------------------

void determinism(Check& check) {
  TempDir dir("acceptance-determinism");
  std::filesystem::create_directories(dir / "velodyne");
  std::filesystem::create_directories(dir / "labels");

  const LabeledCloud scene = testing::street_scene();
  kitti::save_scan(scene, dir.path() / "velodyne" / "000000.bin",
                   dir.path() / "labels" / "000000.label");
  // second frame: the same street three meters on
  LabeledCloud shifted = scene;
  for (Point3& p : shifted.positions) p[0] += 3.0f;
  kitti::save_scan(shifted, dir.path() / "velodyne" / "000001.bin",
                   dir.path() / "labels" / "000001.label");

  const unsigned max_jobs =
      std::max(2u, std::thread::hardware_concurrency());
  std::vector<std::string> outputs;
  for (unsigned jobs : {1u, 2u, max_jobs}) {
    const auto out = dir / ("table-" + std::to_string(jobs) + ".csv");
    const segdelta::testing::RunResult run = segdelta::testing::run_process(
        {SEGDELTA_CLI_PATH, "rd-sweep", dir.path().string(), "--jobs",
         std::to_string(jobs), "--out", out.string()});
    check.expect(run.exit_code == 0,
                 "rd-sweep failed at jobs " + std::to_string(jobs));
    if (run.exit_code != 0) return;
    std::ifstream in(out, std::ios::binary);
    outputs.emplace_back((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  }
  check.expect(!outputs[0].empty(), "rd-sweep produced no output");
  check.expect(outputs[0] == outputs[1], "jobs 1 and 2 outputs differ");
  check.expect(outputs[0] == outputs[2], "jobs 1 and max outputs differ");
}

struct Criterion {
  const char* name;
  void (*run)(Check&);
  double time_limit_s;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"metric hand examples", metric_hand_examples, 1.0},
      {"oracle equivalence", oracle_equivalence, 120.0},
      {"identity and range", identity_and_range, 0.0},
      {"alpha behavior", alpha_behavior, 0.0},
      {"rate ladder fidelity", rate_ladder, 0.0},
      {"quantizer contract", quantizer_contract, 30.0},
      {"rate-distortion trend", rd_trend, 120.0},
      {"io fidelity", io_fidelity, 0.0},
      {"determinism under parallelism", determinism, 0.0},
  };

  bool all_ok = true;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.time_limit_s > 0.0 && elapsed > criterion.time_limit_s) {
      check.expect(false, "over the time limit");
    }
    std::printf("%s %d/9 %s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL", index,
                criterion.name, elapsed, check.ok ? "" : ": ",
                check.detail.c_str());
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}
