#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lds/errors.hpp"

namespace lds {

enum class Channel { PressurePa, FlowM3s, TemperatureK };

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::PressurePa: return "pressure_pa";
    case Channel::FlowM3s: return "flow_m3_s";
    case Channel::TemperatureK: return "temperature_k";
  }
  return "?";
}

inline std::optional<Channel> channel_from_name(std::string_view name) {
  if (name == "pressure_pa") return Channel::PressurePa;
  if (name == "flow_m3_s") return Channel::FlowM3s;
  if (name == "temperature_k") return Channel::TemperatureK;
  return std::nullopt;
}

// One telemetry reading as it appears on the wire / in CSV rows.
struct SensorSample {
  double timestamp_s = 0.0;
  std::string station_id;
  Channel channel = Channel::PressurePa;
  double value = 0.0;
};

inline void validate_sample(const SensorSample& s) {
  if (!std::isfinite(s.value) || !std::isfinite(s.timestamp_s))
    throw InputError("sensor sample has non-finite value or timestamp");
  if (s.channel == Channel::PressurePa && s.value < 0.0)
    throw InputError("pressure sample below zero");
  if (s.station_id.empty()) throw InputError("sensor sample missing station id");
}

// Uniformly sampled single-channel station telemetry.
struct TimeSeries {
  double start_time_s = 0.0;
  double sample_interval_s = 1.0;
  std::vector<double> values;
  Channel channel = Channel::PressurePa;
  std::string station_id;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t i) const {
    return start_time_s + static_cast<double>(i) * sample_interval_s;
  }
  double end_time_s() const {
    return values.empty() ? start_time_s : time_at(values.size() - 1);
  }

  // Linear interpolation between samples; exact at sample instants.
  double value_at(double t) const {
    if (values.empty()) throw RangeError("value_at on empty series");
    if (t < start_time_s - 1e-9 * sample_interval_s ||
        t > end_time_s() + 1e-9 * sample_interval_s)
      throw RangeError("time outside series span");
    const double pos = (t - start_time_s) / sample_interval_s;
    const auto i = static_cast<std::size_t>(
        std::clamp(std::floor(pos), 0.0, static_cast<double>(values.size() - 1)));
    if (i + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
  }
};

inline void validate_series(const TimeSeries& s) {
  if (s.sample_interval_s <= 0.0) throw InputError("sample interval must be > 0");
  if (s.values.empty()) throw InputError("time series has no samples");
  for (double v : s.values)
    if (!std::isfinite(v)) throw InputError("time series contains non-finite value");
}

}  // namespace lds
