// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#include "segdelta/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "segdelta/error.hpp"
#include "segdelta/rate.hpp"

namespace segdelta {

namespace {

constexpr char kCsvHeader[] =
    "rate_point,throughput_mb_s,label_id,label_name,delta,s_count,e_count,"
    "eh_count,scan_count";

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(std::string_view text, const char* field) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("bad ") + field + " value '" + std::string(text) +
                    "'");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text, const char* field) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("bad ") + field + " value '" + std::string(text) +
                    "'");
  }
  return value;
}

// Ladder presets sort first, in ladder order; anything else after.
std::size_t rate_point_rank(const std::string& name) {
  const auto table = preset_table();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].name == name) return i;
  }
  return table.size();
}

void sort_records(std::vector<RdRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const RdRecord& a, const RdRecord& b) {
                     const std::size_t ra = rate_point_rank(a.rate_point);
                     const std::size_t rb = rate_point_rank(b.rate_point);
                     if (ra != rb) return ra < rb;
                     if (a.rate_point != b.rate_point)
                       return a.rate_point < b.rate_point;
                     return a.label_id < b.label_id;
                   });
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_quote(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::InvalidArgument,
                "unterminated quote on CSV line " + std::to_string(line_no));
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

std::vector<RdRecord> aggregate(
    const std::vector<std::vector<LabelMetricResult>>& scans,
    const MetricConfig& config, const AggregateOptions& options) {
  if (scans.empty()) {
    throw Error(ErrorCode::EmptyInput, "no scan results to aggregate");
  }

  struct Acc {
    std::uint64_t s = 0, e = 0, eh = 0, scans = 0;
    double delta_sum = 0.0;
  };
  std::map<std::uint16_t, Acc> by_label;
  for (const auto& scan : scans) {
    for (const LabelMetricResult& r : scan) {
      if (r.label == 0 && !options.include_unlabeled) continue;
      if (r.s_count == 0) continue;
      Acc& acc = by_label[r.label];
      acc.s += r.s_count;
      acc.e += r.e_count;
      acc.eh += r.eh_count;
      acc.scans += 1;
      if (r.delta) acc.delta_sum += *r.delta;
    }
  }

  std::vector<RdRecord> records;
  records.reserve(by_label.size());
  for (const auto& [label, acc] : by_label) {
    RdRecord rec;
    rec.rate_point = options.rate_point;
    rec.throughput_mb_s = options.throughput_mb_s;
    rec.label_id = label;
    rec.label_name = std::to_string(label);
    rec.s_count = acc.s;
    rec.e_count = acc.e;
    rec.eh_count = acc.eh;
    rec.scan_count = acc.scans;
    if (options.mode == AggregateMode::Pooled) {
      rec.delta = delta_value(acc.s, acc.e, acc.eh, config.is_human(label),
                              config.alpha);
    } else {
      rec.delta = acc.delta_sum / double(acc.scans);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

ClassMap ClassMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw Error(ErrorCode::Io, "cannot open class map " + path.string());
  }
  ClassMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected '<id>,<name>'");
    }
    const std::uint64_t id = parse_u64(line.substr(0, comma), "class id");
    if (id > 0xffff) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ":" + std::to_string(line_no) +
                      ": class id out of 16-bit range");
    }
    map.set(static_cast<std::uint16_t>(id), line.substr(comma + 1));
  }
  return map;
}

void ClassMap::set(std::uint16_t id, std::string name) {
  names_[id] = std::move(name);
}

std::string ClassMap::name_of(std::uint16_t id) const {
  const auto it = names_.find(id);
  return it != names_.end() ? it->second : std::to_string(id);
}

void apply_class_map(std::vector<RdRecord>& records, const ClassMap& map) {
  for (RdRecord& rec : records) {
    rec.label_name = map.name_of(rec.label_id);
  }
}

std::string to_csv(std::vector<RdRecord> records) {
  sort_records(records);
  std::string out = kCsvHeader;
  out += '\n';
  for (const RdRecord& rec : records) {
    out += csv_quote(rec.rate_point);
    out += ',';
    out += format_double(rec.throughput_mb_s);
    out += ',';
    out += std::to_string(rec.label_id);
    out += ',';
    out += csv_quote(rec.label_name);
    out += ',';
    if (rec.delta) out += format_double(*rec.delta);
    out += ',';
    out += std::to_string(rec.s_count);
    out += ',';
    out += std::to_string(rec.e_count);
    out += ',';
    out += std::to_string(rec.eh_count);
    out += ',';
    out += std::to_string(rec.scan_count);
    out += '\n';
  }
  return out;
}

std::string to_json(std::vector<RdRecord> records) {
  sort_records(records);
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const RdRecord& rec : records) {
    nlohmann::ordered_json obj;
    obj["rate_point"] = rec.rate_point;
    obj["throughput_mb_s"] = rec.throughput_mb_s;
    obj["label_id"] = rec.label_id;
    obj["label_name"] = rec.label_name;
    if (rec.delta) {
      obj["delta"] = *rec.delta;
    } else {
      obj["delta"] = nullptr;
    }
    obj["s_count"] = rec.s_count;
    obj["e_count"] = rec.e_count;
    obj["eh_count"] = rec.eh_count;
    obj["scan_count"] = rec.scan_count;
    array.push_back(std::move(obj));
  }
  return array.dump(2) + "\n";
}

std::vector<RdRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<RdRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::InvalidArgument,
                    "unexpected CSV header: " + line);
      }
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line, line_no);
    if (fields.size() != 9) {
      throw Error(ErrorCode::InvalidArgument,
                  "expected 9 fields on CSV line " + std::to_string(line_no) +
                      ", got " + std::to_string(fields.size()));
    }
    RdRecord rec;
    rec.rate_point = fields[0];
    rec.throughput_mb_s = parse_double(fields[1], "throughput_mb_s");
    rec.label_id =
        static_cast<std::uint16_t>(parse_u64(fields[2], "label_id"));
    rec.label_name = fields[3];
    if (!fields[4].empty()) rec.delta = parse_double(fields[4], "delta");
    rec.s_count = parse_u64(fields[5], "s_count");
    rec.e_count = parse_u64(fields[6], "e_count");
    rec.eh_count = parse_u64(fields[7], "eh_count");
    rec.scan_count = parse_u64(fields[8], "scan_count");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RdRecord> parse_json(const std::string& text) {
  nlohmann::json array;
  try {
    array = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("bad record JSON: ") + e.what());
  }
  if (!array.is_array()) {
    throw Error(ErrorCode::InvalidArgument, "record JSON must be an array");
  }
  std::vector<RdRecord> records;
  records.reserve(array.size());
  for (const auto& obj : array) {
    try {
      RdRecord rec;
      rec.rate_point = obj.at("rate_point").get<std::string>();
      rec.throughput_mb_s = obj.at("throughput_mb_s").get<double>();
      rec.label_id = obj.at("label_id").get<std::uint16_t>();
      rec.label_name = obj.at("label_name").get<std::string>();
      if (!obj.at("delta").is_null()) {
        rec.delta = obj.at("delta").get<double>();
      }
      rec.s_count = obj.at("s_count").get<std::uint64_t>();
      rec.e_count = obj.at("e_count").get<std::uint64_t>();
      rec.eh_count = obj.at("eh_count").get<std::uint64_t>();
      rec.scan_count = obj.at("scan_count").get<std::uint64_t>();
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("bad record JSON: ") + e.what());
    }
  }
  return records;
}

void emit(const std::vector<RdRecord>& records, OutputFormat format,
          const std::filesystem::path& destination) {
  const std::string text =
      format == OutputFormat::Csv ? to_csv(records) : to_json(records);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw Error(ErrorCode::Io,
                "cannot open " + destination.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "failed to write " + destination.string());
  }
}

std::map<std::string, std::uint64_t> load_rate_manifest(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw Error(ErrorCode::Io, "cannot open rate manifest " + path.string());
  }
  nlohmann::json array;
  try {
    in >> array;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                path.string() + ": bad manifest JSON: " + e.what());
  }
  if (!array.is_array()) {
    throw Error(ErrorCode::InvalidArgument,
                path.string() + ": manifest must be a JSON array");
  }
  std::map<std::string, std::uint64_t> manifest;
  for (const auto& obj : array) {
    try {
      manifest[obj.at("scan_id").get<std::string>()] =
          obj.at("bitstream_bytes").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + ": bad manifest entry: " + e.what());
    }
  }
  return manifest;
}

}  // namespace segdelta
