// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0
//
// segdelta command line: batch evaluation of segmentation distortion under
// lossy point cloud geometry compression.
//
//   compare   one reference/degraded scan pair -> per-label records
//   quantize  QS geometry quantization of one scan
//   rd-sweep  quantize + oracle-segment + metric over a sequence directory
//   report    merge per-scan record files into one aggregated table
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 internal.

#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "segdelta/error.hpp"
#include "segdelta/kitti_io.hpp"
#include "segdelta/metric.hpp"
#include "segdelta/quantize.hpp"
#include "segdelta/rate.hpp"
#include "segdelta/report.hpp"

namespace fs = std::filesystem;
using namespace segdelta;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::vector<std::uint16_t> to_label_set(const std::vector<std::uint32_t>& ids) {
  std::vector<std::uint16_t> labels;
  labels.reserve(ids.size());
  for (std::uint32_t id : ids) {
    if (id > 0xffff) {
      throw UsageError("label id " + std::to_string(id) +
                       " is out of 16-bit range");
    }
    labels.push_back(static_cast<std::uint16_t>(id));
  }
  return labels;
}

AggregateMode parse_mode(const std::string& mode) {
  return mode == "mean" ? AggregateMode::Mean : AggregateMode::Pooled;
}

OutputFormat parse_format(const std::string& format) {
  return format == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

std::string render(const std::vector<RdRecord>& records, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(records) : to_json(records);
}

void write_text(const std::string& text, const std::optional<fs::path>& out) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary | std::ios::trunc);
  if (!f.is_open()) {
    throw Error(ErrorCode::Io, "cannot open " + out->string() + " for writing");
  }
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) {
    throw Error(ErrorCode::Io, "failed to write " + out->string());
  }
}

fs::path alpha_suffixed(const fs::path& base, double alpha) {
  fs::path p = base;
  const std::string name =
      p.stem().string() + "-alpha" + format_double(alpha) + p.extension().string();
  return p.parent_path() / name;
}

// Shared flags for the record-emitting commands.
struct MetricFlags {
  std::vector<double> alphas{1.0};
  std::vector<std::uint32_t> human_ids{kPersonLabel};
  std::string mode = "pooled";
  std::string format = "csv";
  std::optional<fs::path> out;
  std::optional<fs::path> class_map_path;
  bool include_unlabeled = false;
};

void add_metric_flags(CLI::App* cmd, MetricFlags& flags) {
  cmd->add_option("--alpha", flags.alphas,
                  "human-error weight(s); a comma list sweeps alpha and "
                  "writes one output per value")
      ->delimiter(',');
  cmd->add_option("--human-labels", flags.human_ids,
                  "class ids weighted as human (default: 30)")
      ->delimiter(',');
  cmd->add_option("--mode", flags.mode, "aggregation across scans")
      ->check(CLI::IsMember({"pooled", "mean"}));
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", flags.out, "output path (default: stdout)");
  cmd->add_option("--class-map", flags.class_map_path,
                  "optional '<id>,<name>' file resolving label names");
  cmd->add_flag("--include-unlabeled", flags.include_unlabeled,
                "keep label 0 rows in aggregates");
}

MetricConfig base_config(const MetricFlags& flags) {
  MetricConfig config;
  if (flags.alphas.empty()) {
    throw UsageError("--alpha needs at least one value");
  }
  for (double a : flags.alphas) {
    if (!(a >= 0.0)) {
      throw UsageError("alpha must be non-negative, got " + format_double(a));
    }
  }
  config.alpha = flags.alphas.front();
  config.human_labels = to_label_set(flags.human_ids);
  return config;
}

ClassMap load_class_map_if_given(const MetricFlags& flags) {
  return flags.class_map_path ? ClassMap::load(*flags.class_map_path)
                              : ClassMap{};
}

// Emits one rendered table per alpha value; multiple alphas need --out so
// each sweep point lands in its own file.
void emit_per_alpha(
    const MetricFlags& flags, const MetricConfig& config,
    const std::vector<std::vector<LabelMetricResult>>& per_scan,
    const std::string& rate_point, double throughput_mb_s) {
  if (flags.alphas.size() > 1 && !flags.out) {
    throw UsageError("an --alpha sweep needs --out to name one file per value");
  }
  const ClassMap class_map = load_class_map_if_given(flags);
  const OutputFormat format = parse_format(flags.format);
  for (double alpha : flags.alphas) {
    MetricConfig cfg = config;
    cfg.alpha = alpha;
    std::vector<std::vector<LabelMetricResult>> scans = per_scan;
    for (auto& scan : scans) rescore(scan, cfg);
    AggregateOptions options;
    options.mode = parse_mode(flags.mode);
    options.include_unlabeled = flags.include_unlabeled;
    options.rate_point = rate_point;
    options.throughput_mb_s = throughput_mb_s;
    std::vector<RdRecord> records = aggregate(scans, cfg, options);
    apply_class_map(records, class_map);
    const std::optional<fs::path> out =
        flags.alphas.size() > 1
            ? std::optional<fs::path>(alpha_suffixed(*flags.out, alpha))
            : flags.out;
    write_text(render(records, format), out);
  }
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  fs::path ref_scan, ref_labels, deg_scan, deg_labels;
  MetricFlags flags;
  std::optional<fs::path> rate_manifest;
  std::string preset;
  unsigned jobs = std::thread::hardware_concurrency();
};

int run_compare(const CompareArgs& args) {
  std::string rate_point = "custom";
  if (!args.preset.empty()) {
    const RatePreset* preset = find_preset(args.preset);
    if (preset == nullptr) {
      throw UsageError("unknown preset '" + args.preset + "'");
    }
    rate_point = std::string(preset->name);
  }

  const LabeledCloud reference = kitti::load_scan(args.ref_scan, args.ref_labels);
  const LabeledCloud degraded = kitti::load_scan(args.deg_scan, args.deg_labels);

  std::uint64_t bytes = 0;
  if (args.rate_manifest) {
    const auto manifest = load_rate_manifest(*args.rate_manifest);
    const std::string scan_id = args.deg_scan.stem().string();
    const auto it = manifest.find(scan_id);
    if (it == manifest.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  args.rate_manifest->string() + " has no entry for scan '" +
                      scan_id + "'");
    }
    bytes = it->second;
  } else {
    std::error_code ec;
    bytes = fs::file_size(args.deg_scan, ec);
    std::cerr << "note: no --rate-manifest; using the decoded scan size ("
              << bytes << " bytes) as a proxy rate\n";
  }
  const double mb_s = throughput(bytes, 1, 10.0).throughput_mb_s;

  const MetricConfig config = base_config(args.flags);
  const std::vector<LabelMetricResult> results =
      evaluate_pair({reference, degraded}, config, std::max(1u, args.jobs));
  emit_per_alpha(args.flags, config, {results}, rate_point, mb_s);
  return 0;
}

// --------------------------------------------------------------- quantize

struct QuantizeArgs {
  fs::path input, output;
  std::optional<fs::path> labels_in, labels_out;
  double qs = 0.0;
  std::string preset;
  bool qs_given = false;
  bool no_merge = false;
  bool no_dequantize = false;
};

int run_quantize(const QuantizeArgs& args) {
  double qs = args.qs;
  if (args.qs_given == !args.preset.empty()) {
    throw UsageError("quantize needs exactly one of --qs or --preset");
  }
  if (!args.preset.empty()) {
    const RatePreset* preset = find_preset(args.preset);
    if (preset == nullptr) {
      throw UsageError("unknown preset '" + args.preset + "'");
    }
    qs = preset->qs;
  }
  if (!(qs > 0.0)) {
    throw UsageError("qs must be positive, got " + format_double(qs));
  }

  const LabeledCloud input = kitti::load_scan(args.input, args.labels_in);
  QuantizeConfig config;
  config.qs = qs;
  config.merge_duplicates = !args.no_merge;
  config.dequantize = !args.no_dequantize;
  const LabeledCloud output = quantize_geometry(input, config);

  std::optional<fs::path> labels_out;
  if (args.labels_in) {
    labels_out = args.labels_out
                     ? *args.labels_out
                     : fs::path(args.output).replace_extension(".label");
  }
  kitti::save_scan(output, args.output, labels_out);
  std::cerr << "quantized " << input.size() << " -> " << output.size()
            << " points at qs " << format_double(qs) << "\n";
  return 0;
}

// --------------------------------------------------------------- rd-sweep

struct SweepArgs {
  fs::path sequence_dir;
  std::vector<std::string> preset_names;
  std::optional<std::size_t> limit;
  unsigned jobs = std::thread::hardware_concurrency();
  bool no_merge = false;
  bool no_dequantize = false;
  MetricFlags flags;
};

int run_rd_sweep(const SweepArgs& args) {
  std::vector<const RatePreset*> presets;
  if (args.preset_names.empty()) {
    for (const RatePreset& preset : preset_table()) presets.push_back(&preset);
  } else {
    for (const std::string& name : args.preset_names) {
      const RatePreset* preset = find_preset(name);
      if (preset == nullptr) {
        throw UsageError("unknown preset '" + name + "'");
      }
      presets.push_back(preset);
    }
  }
  const MetricConfig config = base_config(args.flags);

  const std::vector<kitti::SequenceEntry> entries =
      kitti::enumerate_sequence(args.sequence_dir, args.limit);
  if (entries.empty()) {
    throw Error(ErrorCode::EmptyInput,
                "no scans under " + (args.sequence_dir / "velodyne").string());
  }

  const std::size_t n_presets = presets.size();
  const std::size_t n_scans = entries.size();
  const std::size_t n_tasks = n_presets * n_scans;
  std::vector<std::vector<std::vector<LabelMetricResult>>> results(
      n_presets, std::vector<std::vector<LabelMetricResult>>(n_scans));
  std::vector<std::vector<std::uint64_t>> bytes(
      n_presets, std::vector<std::uint64_t>(n_scans, 0));
  std::vector<std::string> failures(n_tasks);

  QuantizeConfig qconfig;
  qconfig.merge_duplicates = !args.no_merge;
  qconfig.dequantize = !args.no_dequantize;

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t pi = task / n_scans;
      const std::size_t si = task % n_scans;
      try {
        const kitti::SequenceEntry& entry = entries[si];
        LabeledCloud reference =
            kitti::load_scan(entry.scan_path, entry.label_path);
        if (reference.empty()) {
          throw Error(ErrorCode::EmptyCloud,
                      entry.scan_path.string() + " has no points");
        }
        QuantizeConfig qc = qconfig;
        qc.qs = presets[pi]->qs;
        const LabeledCloud quantized = quantize_geometry(reference, qc);
        LabeledCloud segmented = oracle_segment(quantized, reference);
        bytes[pi][si] = 16ull * segmented.size();
        const ScanPair pair{std::move(reference), std::move(segmented)};
        results[pi][si] = evaluate_pair(pair, config, 1);
      } catch (const std::exception& e) {
        failures[task] = entries[si].scan_path.string() + " [" +
                         std::string(presets[pi]->name) + "]: " + e.what();
      }
    }
  };

  const unsigned n_workers = std::max(1u, args.jobs);
  std::vector<std::thread> threads;
  const std::size_t spawn = std::min<std::size_t>(n_workers, n_tasks);
  threads.reserve(spawn);
  for (std::size_t i = 0; i < spawn; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  bool failed = false;
  for (const std::string& failure : failures) {
    if (!failure.empty()) {
      std::cerr << "error: " << failure << "\n";
      failed = true;
    }
  }
  if (failed) return 2;

  if (args.flags.alphas.size() > 1 && !args.flags.out) {
    throw UsageError("an --alpha sweep needs --out to name one file per value");
  }
  std::cerr << "note: throughput is a proxy rate from serialized quantized "
               "scans (16 bytes/point), not a codec bitstream\n";

  const ClassMap class_map = load_class_map_if_given(args.flags);
  const OutputFormat format = parse_format(args.flags.format);
  for (double alpha : args.flags.alphas) {
    MetricConfig cfg = config;
    cfg.alpha = alpha;
    std::vector<RdRecord> records;
    for (std::size_t pi = 0; pi < n_presets; ++pi) {
      std::uint64_t total_bytes = 0;
      for (std::uint64_t b : bytes[pi]) total_bytes += b;
      const double mb_s =
          throughput(total_bytes, n_scans, 10.0).throughput_mb_s;
      std::vector<std::vector<LabelMetricResult>> scans = results[pi];
      for (auto& scan : scans) rescore(scan, cfg);
      AggregateOptions options;
      options.mode = parse_mode(args.flags.mode);
      options.include_unlabeled = args.flags.include_unlabeled;
      options.rate_point = std::string(presets[pi]->name);
      options.throughput_mb_s = mb_s;
      std::vector<RdRecord> preset_records = aggregate(scans, cfg, options);
      records.insert(records.end(),
                     std::make_move_iterator(preset_records.begin()),
                     std::make_move_iterator(preset_records.end()));
    }
    apply_class_map(records, class_map);
    const std::optional<fs::path> out =
        args.flags.alphas.size() > 1
            ? std::optional<fs::path>(alpha_suffixed(*args.flags.out, alpha))
            : args.flags.out;
    write_text(render(records, format), out);
  }
  return 0;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
  std::vector<fs::path> inputs;
  MetricFlags flags;
};

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

int run_report(const ReportArgs& args) {
  const double alpha = base_config(args.flags).alpha;

  struct LabelAcc {
    std::uint64_t s = 0, e = 0, eh = 0, scans = 0;
    double delta_weighted = 0.0;
    std::uint64_t delta_weight = 0;
  };
  std::map<std::string, std::map<std::uint16_t, LabelAcc>> groups;
  // rate point -> (sum of throughput * weight, sum of weights)
  std::map<std::string, std::pair<double, std::uint64_t>> rates;

  for (const fs::path& input : args.inputs) {
    const std::string text = read_text_file(input);
    const std::vector<RdRecord> records =
        input.extension() == ".csv" ? parse_csv(text) : parse_json(text);
    std::map<std::string, std::uint64_t> file_weight;
    std::map<std::string, double> file_tp;
    for (const RdRecord& rec : records) {
      if (rec.label_id == 0 && !args.flags.include_unlabeled) continue;
      LabelAcc& acc = groups[rec.rate_point][rec.label_id];
      acc.s += rec.s_count;
      acc.e += rec.e_count;
      acc.eh += rec.eh_count;
      acc.scans += rec.scan_count;
      if (rec.delta) {
        acc.delta_weighted += *rec.delta * double(rec.scan_count);
        acc.delta_weight += rec.scan_count;
      }
      file_tp[rec.rate_point] = rec.throughput_mb_s;
      std::uint64_t& w = file_weight[rec.rate_point];
      w = std::max(w, rec.scan_count);
    }
    for (const auto& [rate_point, weight] : file_weight) {
      rates[rate_point].first += file_tp[rate_point] * double(weight);
      rates[rate_point].second += weight;
    }
  }

  const AggregateMode mode = parse_mode(args.flags.mode);
  std::vector<RdRecord> merged;
  for (const auto& [rate_point, labels] : groups) {
    const auto& [tp_sum, tp_weight] = rates[rate_point];
    const double mb_s = tp_weight > 0 ? tp_sum / double(tp_weight) : 0.0;
    for (const auto& [label, acc] : labels) {
      RdRecord rec;
      rec.rate_point = rate_point;
      rec.throughput_mb_s = mb_s;
      rec.label_id = label;
      rec.label_name = std::to_string(label);
      rec.s_count = acc.s;
      rec.e_count = acc.e;
      rec.eh_count = acc.eh;
      rec.scan_count = acc.scans;
      if (mode == AggregateMode::Pooled) {
        // eh_count is zero for non-human labels, so the weighted form
        // reduces to e/s for them.
        rec.delta = delta_value(acc.s, acc.e, acc.eh, true, alpha);
      } else if (acc.delta_weight > 0) {
        rec.delta = acc.delta_weighted / double(acc.delta_weight);
      }
      merged.push_back(std::move(rec));
    }
  }

  const ClassMap class_map = load_class_map_if_given(args.flags);
  apply_class_map(merged, class_map);
  write_text(render(merged, parse_format(args.flags.format)), args.flags.out);
  return 0;
}

int dispatch_error(const Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  switch (e.code()) {
    case ErrorCode::Io:
    case ErrorCode::MalformedScan:
    case ErrorCode::LabelCountMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::EmptyCloud:
    case ErrorCode::InvalidArgument:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "segdelta: segmentation distortion metrics for compressed LiDAR "
      "point clouds"};
  app.require_subcommand(1);

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "evaluate one reference/degraded scan pair");
  compare->add_option("ref_scan", compare_args.ref_scan, "reference .bin")
      ->required();
  compare->add_option("ref_labels", compare_args.ref_labels, "reference .label")
      ->required();
  compare->add_option("deg_scan", compare_args.deg_scan, "degraded .bin")
      ->required();
  compare->add_option("deg_labels", compare_args.deg_labels, "degraded .label")
      ->required();
  add_metric_flags(compare, compare_args.flags);
  compare->add_option("--rate-manifest", compare_args.rate_manifest,
                      "JSON array of {scan_id, bitstream_bytes}");
  compare->add_option("--preset", compare_args.preset,
                      "tag records with this ladder rate point");
  compare->add_option("--jobs", compare_args.jobs, "query threads");

  QuantizeArgs quantize_args;
  CLI::App* quantize =
      app.add_subcommand("quantize", "QS geometry quantization of one scan");
  quantize->add_option("input", quantize_args.input, "input .bin")->required();
  quantize->add_option("output", quantize_args.output, "output .bin")
      ->required();
  quantize->add_option("--labels", quantize_args.labels_in,
                       "input .label carried through the quantizer");
  quantize->add_option("--labels-out", quantize_args.labels_out,
                       "output .label (default: output scan with .label)");
  quantize
      ->add_option("--qs", quantize_args.qs, "quantization scale (> 0)")
      ->check(CLI::PositiveNumber);
  quantize->add_option("--preset", quantize_args.preset,
                       "ladder rate point supplying the qs");
  quantize->add_flag("--no-merge", quantize_args.no_merge,
                     "keep duplicate quantized points");
  quantize->add_flag("--no-dequantize", quantize_args.no_dequantize,
                     "leave coordinates on the integer grid");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "rd-sweep",
      "quantize + oracle-segment + metric across a sequence directory");
  sweep->add_option("sequence_dir", sweep_args.sequence_dir,
                    "directory with velodyne/ and labels/")
      ->required();
  sweep
      ->add_option("--preset", sweep_args.preset_names,
                   "rate points to sweep (default: the whole ladder)")
      ->delimiter(',');
  sweep->add_option("--limit", sweep_args.limit,
                    "process only the first N scans");
  sweep->add_option("--jobs", sweep_args.jobs, "parallel scan workers");
  sweep->add_flag("--no-merge", sweep_args.no_merge,
                  "keep duplicate quantized points");
  sweep->add_flag("--no-dequantize", sweep_args.no_dequantize,
                  "leave coordinates on the integer grid");
  add_metric_flags(sweep, sweep_args.flags);

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "merge per-scan record files into one table");
  report->add_option("inputs", report_args.inputs,
                     "record files from compare/rd-sweep (.json or .csv)")
      ->required();
  add_metric_flags(report, report_args.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (compare->parsed()) return run_compare(compare_args);
    if (quantize->parsed()) {
      quantize_args.qs_given = quantize->count("--qs") > 0;
      return run_quantize(quantize_args);
    }
    if (sweep->parsed()) return run_rd_sweep(sweep_args);
    if (report->parsed()) return run_report(report_args);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    return dispatch_error(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
