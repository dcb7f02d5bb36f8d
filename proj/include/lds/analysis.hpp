#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "lds/acoustic.hpp"
#include "lds/detect.hpp"
#include "lds/inventory.hpp"
#include "lds/localize.hpp"
#include "lds/pipeline.hpp"
#include "lds/simulate.hpp"
#include "lds/timeseries.hpp"

namespace lds {

enum class AlarmKind { PressureWaveLeak, VolumeImbalance };

inline const char* alarm_kind_name(AlarmKind k) {
  return k == AlarmKind::PressureWaveLeak ? "PRESSURE_WAVE_LEAK" : "VOLUME_IMBALANCE";
}

// One operator-facing alarm. Pressure-wave alarms carry a chainage and a
// time difference; volume-imbalance alarms carry the cumulative lost volume.
struct Alarm {
  double time_s = 0.0;
  AlarmKind kind = AlarmKind::PressureWaveLeak;
  std::optional<double> chainage_m;
  std::optional<double> time_difference_s;
  std::optional<double> delta_v_m3;
  Severity severity = Severity::Monitor;
  double confidence = 0.0;
  std::string notes;
};

struct DetectionSettings {
  DetectionConfig onset;
  double max_lag_s = 0.0;  // 0 = derive from the line travel time
  double dominant_frequency_hz = 10.0;
  double sensor_floor_pa = 500.0;           // 5 mbar
  std::size_t baseline_window_samples = 100;
};

struct BalanceSettings {
  double threshold_m3 = 1.0;
  int persistence_windows = 3;
};

namespace analysis_detail {

// Mean of up to `count` samples ending just before (from_end) or starting
// just after (from_start) the given index.
inline double window_mean(const TimeSeries& s, std::size_t begin, std::size_t end) {
  end = std::min(end, s.values.size());
  if (begin >= end) return s.values.empty() ? 0.0 : s.values.front();
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += s.values[i];
  return sum / static_cast<double>(end - begin);
}

// Step amplitude at an onset: pre-onset mean minus post-onset mean, with a
// guard gap so the transition itself stays out of both windows. Positive for
// a pressure drop.
inline double step_amplitude(const TimeSeries& s, double onset_time_s, std::size_t guard,
                             std::size_t window) {
  const double pos = (onset_time_s - s.start_time_s) / s.sample_interval_s;
  const auto idx = static_cast<std::size_t>(
      std::clamp(pos, 0.0, static_cast<double>(s.values.size() - 1)));
  const std::size_t pre_end = idx > guard ? idx - guard : 0;
  const std::size_t pre_begin = pre_end > window ? pre_end - window : 0;
  const std::size_t post_begin = std::min(idx + guard, s.values.size());
  const std::size_t post_end = std::min(post_begin + window, s.values.size());
  return window_mean(s, pre_begin, pre_end) - window_mean(s, post_begin, post_end);
}

inline std::string format_notes(const char* fmt, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

}  // namespace analysis_detail

// Full pressure-wave pipeline over one pair of station pressure channels:
// wavelet onsets at both ends, chronological pairing, localization against
// the velocity profile, severity from the inverted attenuation and hole
// ratio. Only drop/drop pairs raise leak alarms; rise pairs are surges and
// stay out of the stream.
inline std::vector<Alarm> run_leak_detection(const TimeSeries& inlet_pressure,
                                             const TimeSeries& outlet_pressure,
                                             const PipelineProfile& profile,
                                             const AttenuationModel& attenuation,
                                             const DetectionSettings& settings) {
  if (inlet_pressure.channel != Channel::PressurePa ||
      outlet_pressure.channel != Channel::PressurePa)
    throw InputError("run_leak_detection expects pressure channels");
  require_valid(profile);
  require_valid(attenuation);

  const auto inlet_onsets = detect_onsets(inlet_pressure, settings.onset);
  const auto outlet_onsets = detect_onsets(outlet_pressure, settings.onset);
  const double total = total_travel_time(profile);
  const double max_lag =
      settings.max_lag_s > 0.0 ? settings.max_lag_s : total * 1.1 + 1.0;
  const auto paired = pair_events(inlet_onsets, outlet_onsets, max_lag);

  const double n = static_cast<double>(
      std::max(inlet_pressure.values.size(), outlet_pressure.values.size()));
  const double threshold_multiplier =
      settings.onset.lambda * std::sqrt(2.0 * std::log(n));
  // Onset jitter can push a boundary pair just past the feasible range;
  // clamp within two samples of it, skip anything further out.
  const double slack = 2.0 * std::max(inlet_pressure.sample_interval_s,
                                      outlet_pressure.sample_interval_s);

  std::vector<Alarm> alarms;
  for (const auto& [inlet, outlet] : paired.pairs) {
    if (inlet.polarity != Polarity::Drop) continue;
    double dt = inlet.onset_time_s - outlet.onset_time_s;
    if (std::abs(dt) > total) {
      if (std::abs(dt) > total + slack) continue;
      dt = std::copysign(total, dt);
    }
    LeakFix fix = localize_profile(dt, 0.0, profile);

    const std::size_t guard = 4;  // keep the transition out of the mean windows
    const double amp_in = analysis_detail::step_amplitude(
        inlet_pressure, inlet.onset_time_s, guard, settings.baseline_window_samples);
    const double amp_out = analysis_detail::step_amplitude(
        outlet_pressure, outlet.onset_time_s, guard, settings.baseline_window_samples);

    // Invert the attenuation from each station back to the fix, then size
    // the hole from the no-flow pressure-drop relation.
    const double f = settings.dominant_frequency_hz;
    const double src_in =
        amp_in / attenuation_factor(attenuation, f, fix.chainage_m);
    const double src_out =
        amp_out / attenuation_factor(attenuation, f, profile.length_m - fix.chainage_m);
    const double est_source_drop = 0.5 * (src_in + src_out);

    const std::size_t pre = settings.baseline_window_samples;
    const double base_in = analysis_detail::step_amplitude(inlet_pressure,
                                                           inlet.onset_time_s, guard, pre) +
                           inlet_pressure.value_at(inlet.onset_time_s);
    (void)base_in;
    // Static pressure proxy: mean of the two pre-onset baselines.
    auto pre_mean = [&](const TimeSeries& s, double onset) {
      const double pos = (onset - s.start_time_s) / s.sample_interval_s;
      const auto idx = static_cast<std::size_t>(
          std::clamp(pos, 0.0, static_cast<double>(s.values.size() - 1)));
      const std::size_t end = idx > guard ? idx - guard : 0;
      const std::size_t begin = end > pre ? end - pre : 0;
      return analysis_detail::window_mean(s, begin, end);
    };
    const double static_pressure =
        0.5 * (pre_mean(inlet_pressure, inlet.onset_time_s) +
               pre_mean(outlet_pressure, outlet.onset_time_s));

    double hole_ratio = 0.0;
    if (static_pressure > 0.0 && est_source_drop > 0.0)
      hole_ratio = std::min(1.0, std::sqrt(est_source_drop / (0.3 * static_pressure)));
    const bool detectable = std::min(amp_in, amp_out) >= settings.sensor_floor_pa;

    Alarm alarm;
    alarm.time_s = std::min(inlet.onset_time_s, outlet.onset_time_s);
    alarm.kind = AlarmKind::PressureWaveLeak;
    alarm.chainage_m = fix.chainage_m;
    alarm.time_difference_s = dt;
    alarm.severity = classify_severity(hole_ratio, detectable);
    const double min_strength = std::min(inlet.strength, outlet.strength);
    alarm.confidence = std::isinf(min_strength)
                           ? 1.0
                           : std::clamp(min_strength / (2.0 * threshold_multiplier), 0.0, 1.0);
    alarm.notes = fix.wave_speed_used +
                  analysis_detail::format_notes(
                      "; est_source_drop_pa=%.6g; est_hole_ratio=%.4g; "
                      "emission_band_hz=[%.6g",
                      est_source_drop, hole_ratio, attenuation.reference_band_hz.first) +
                  analysis_detail::format_notes(
                      ",%.6g]; no-flow pressure-drop model", attenuation.reference_band_hz.second,
                      0, 0);
    alarms.push_back(std::move(alarm));
  }
  std::sort(alarms.begin(), alarms.end(),
            [](const Alarm& a, const Alarm& b) { return a.time_s < b.time_s; });
  return alarms;
}

struct BalanceRun {
  std::vector<BalanceResult> results;
  std::optional<ImbalanceAlarm> alarm;
};

// Windowed volume balance over a telemetry set. Boundary inventory uses the
// station-mean pressure (and temperature when telemetry carries it) at each
// window edge; without telemetry the fluid reference values apply, which
// disables that compensation term.
inline BalanceRun run_volume_balance(const TimeSeries& inlet_flow,
                                     const TimeSeries& outlet_flow,
                                     const std::vector<const TimeSeries*>& pressures,
                                     const std::vector<const TimeSeries*>& temperatures,
                                     const PipelineProfile& profile, const FluidState& fluid,
                                     double window_s, const BalanceSettings& settings) {
  if (inlet_flow.channel != Channel::FlowM3s || outlet_flow.channel != Channel::FlowM3s)
    throw InputError("run_volume_balance expects flow channels");
  if (!(window_s > 0.0)) throw InputError("balance window must be > 0");
  require_valid(profile);
  require_valid(fluid);

  double t0 = std::max(inlet_flow.start_time_s, outlet_flow.start_time_s);
  double t_end = std::min(inlet_flow.end_time_s(), outlet_flow.end_time_s());
  for (const auto* p : pressures) {
    t0 = std::max(t0, p->start_time_s);
    t_end = std::min(t_end, p->end_time_s());
  }
  for (const auto* t : temperatures) {
    t0 = std::max(t0, t->start_time_s);
    t_end = std::min(t_end, t->end_time_s());
  }

  auto mean_at = [](const std::vector<const TimeSeries*>& set, double t, double fallback) {
    if (set.empty()) return fallback;
    double sum = 0.0;
    for (const auto* s : set) sum += s->value_at(t);
    return sum / static_cast<double>(set.size());
  };
  auto snapshot = [&](double t) {
    const double p = mean_at(pressures, t, fluid.reference_pressure_pa);
    const double temp = mean_at(temperatures, t, fluid.reference_temperature_k);
    return line_inventory(profile, fluid, p, temp, t);
  };

  BalanceRun run;
  const auto window_count = static_cast<std::size_t>(
      std::floor((t_end - t0) / window_s + 1e-9));
  for (std::size_t k = 0; k < window_count; ++k) {
    const double a = t0 + static_cast<double>(k) * window_s;
    const double b = a + window_s;
    run.results.push_back(
        volume_balance(inlet_flow, outlet_flow, snapshot(a), snapshot(b), a, b));
  }
  run.alarm = detect_imbalance(run.results, settings.threshold_m3,
                               settings.persistence_windows);
  return run;
}

// Dresses an imbalance alarm for the operator stream. Severity comes from a
// leak-rate estimate: cumulative volume over the confirming run, inverted
// through the orifice relation at the line's working pressure.
inline Alarm imbalance_to_alarm(const ImbalanceAlarm& imbalance,
                                const PipelineProfile& profile, const FluidState& fluid,
                                double working_pressure_pa) {
  Alarm alarm;
  alarm.time_s = imbalance.time_s;
  alarm.kind = AlarmKind::VolumeImbalance;
  alarm.delta_v_m3 = imbalance.cumulative_delta_v_m3;
  const double duration = imbalance.time_s - imbalance.first_exceedance_time_s;
  double hole_ratio = 0.0;
  double rate = 0.0;
  if (duration > 0.0 && imbalance.cumulative_delta_v_m3 > 0.0 && working_pressure_pa > 0.0) {
    rate = imbalance.cumulative_delta_v_m3 / duration;
    const double hole =
        hole_diameter_for_leak_rate(rate, working_pressure_pa, fluid.density_kg_m3);
    hole_ratio = std::min(1.0, hole / profile.inner_diameter_m);
  }
  alarm.severity = classify_severity(hole_ratio, true);
  alarm.confidence = std::clamp(static_cast<double>(imbalance.windows) /
                                    static_cast<double>(std::max(1, imbalance.windows)),
                                0.0, 1.0);
  alarm.notes = analysis_detail::format_notes(
      "first_exceedance_time_s=%.6g; est_leak_rate_m3_s=%.6g; est_hole_ratio=%.4g",
      imbalance.first_exceedance_time_s, rate, hole_ratio);
  return alarm;
}

}  // namespace lds
