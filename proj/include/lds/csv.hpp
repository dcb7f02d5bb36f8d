#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "lds/errors.hpp"
#include "lds/timeseries.hpp"

namespace lds {

// Telemetry CSV format, shared by the simulator and the detectors:
//   header  timestamp_s,station_id,channel,value
//   rows    fractional-second timestamps, SI values, LF endings, UTF-8
// Doubles are written with std::to_chars (shortest round-trip form), which
// keeps repeated runs byte-identical.

namespace csv_detail {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& file, std::size_t line,
                           const char* what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    throw InputError(file + ":" + std::to_string(line) + ": bad " + what + " '" +
                     std::string(text) + "'");
  return value;
}

}  // namespace csv_detail

inline void write_telemetry_csv(const std::filesystem::path& path, const TimeSeries& series) {
  validate_series(series);
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw InputError("cannot open for writing: " + path.string());
  out << "timestamp_s,station_id,channel,value\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << csv_detail::format_double(series.time_at(i)) << ',' << series.station_id << ','
        << channel_name(series.channel) << ',' << csv_detail::format_double(series.values[i])
        << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

inline std::vector<SensorSample> read_telemetry_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open telemetry file: " + path.string());
  const std::string file = path.string();
  std::string line;
  std::size_t line_no = 0;
  std::vector<SensorSample> samples;

  if (!std::getline(in, line)) throw InputError(file + ": empty telemetry file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp_s,station_id,channel,value")
    throw InputError(file + ":1: bad header '" + line + "'");

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string_view row(line);
    std::array<std::string_view, 4> fields;
    for (int f = 0; f < 4; ++f) {
      const auto comma = row.find(',');
      if (f < 3) {
        if (comma == std::string_view::npos)
          throw InputError(file + ":" + std::to_string(line_no) + ": expected 4 fields");
        fields[static_cast<std::size_t>(f)] = row.substr(0, comma);
        row.remove_prefix(comma + 1);
      } else {
        if (comma != std::string_view::npos)
          throw InputError(file + ":" + std::to_string(line_no) + ": expected 4 fields");
        fields[static_cast<std::size_t>(f)] = row;
      }
    }

    SensorSample s;
    s.timestamp_s = csv_detail::parse_double(fields[0], file, line_no, "timestamp");
    s.station_id = std::string(fields[1]);
    const auto channel = channel_from_name(fields[2]);
    if (!channel)
      throw InputError(file + ":" + std::to_string(line_no) + ": unknown channel '" +
                       std::string(fields[2]) + "'");
    s.channel = *channel;
    s.value = csv_detail::parse_double(fields[3], file, line_no, "value");
    try {
      validate_sample(s);
    } catch (const InputError& e) {
      throw InputError(file + ":" + std::to_string(line_no) + ": " + e.what());
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

// Groups samples into uniformly sampled series keyed by (station, channel).
// Sampling must be uniform; drift beyond 1e-6 of the interval is rejected.
inline std::map<std::pair<std::string, Channel>, TimeSeries> group_into_series(
    const std::vector<SensorSample>& samples) {
  std::map<std::pair<std::string, Channel>, std::vector<SensorSample>> buckets;
  for (const auto& s : samples) buckets[{s.station_id, s.channel}].push_back(s);

  std::map<std::pair<std::string, Channel>, TimeSeries> out;
  for (auto& [key, rows] : buckets) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SensorSample& a, const SensorSample& b) {
                       return a.timestamp_s < b.timestamp_s;
                     });
    TimeSeries ts;
    ts.station_id = key.first;
    ts.channel = key.second;
    ts.start_time_s = rows.front().timestamp_s;
    if (rows.size() < 2)
      throw InputError("station " + key.first + " channel " + channel_name(key.second) +
                       ": need at least 2 samples");
    ts.sample_interval_s = rows[1].timestamp_s - rows[0].timestamp_s;
    if (!(ts.sample_interval_s > 0.0))
      throw InputError("station " + key.first + ": non-increasing timestamps");
    ts.values.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double expected = ts.start_time_s + static_cast<double>(i) * ts.sample_interval_s;
      if (std::abs(rows[i].timestamp_s - expected) > 1e-6 * ts.sample_interval_s)
        throw InputError("station " + key.first + " channel " + channel_name(key.second) +
                         ": non-uniform sampling near t=" + std::to_string(rows[i].timestamp_s));
      ts.values.push_back(rows[i].value);
    }
    out.emplace(key, std::move(ts));
  }
  return out;
}

// Reads every *.csv in a directory into (station, channel) series.
inline std::map<std::pair<std::string, Channel>, TimeSeries> load_telemetry_dir(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InputError("telemetry directory not found: " + dir.string());
  std::vector<SensorSample> all;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .csv telemetry in " + dir.string());
  for (const auto& f : files) {
    auto samples = read_telemetry_csv(f);
    all.insert(all.end(), samples.begin(), samples.end());
  }
  return group_into_series(all);
}

}  // namespace lds
