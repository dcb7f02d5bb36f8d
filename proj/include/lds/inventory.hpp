#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "lds/errors.hpp"
#include "lds/pipeline.hpp"
#include "lds/timeseries.hpp"

namespace lds {

// Compensated line inventory at one instant.
struct InventorySnapshot {
  double time_s = 0.0;
  double line_volume_m3 = 0.0;
  double mean_pressure_pa = 0.0;
  double mean_temperature_k = 0.0;
};

// Volume balance over one window. leakage_volume_m3 is definitional:
// v_in - v_out - delta_inventory, positive when product left the line.
struct BalanceResult {
  double t0_s = 0.0;
  double t1_s = 0.0;
  double v_in_m3 = 0.0;
  double v_out_m3 = 0.0;
  double delta_inventory_m3 = 0.0;
  double leakage_volume_m3 = 0.0;
};

struct ImbalanceAlarm {
  double time_s = 0.0;                  // end of the window that confirmed the run
  double first_exceedance_time_s = 0.0; // start of the first exceeding window
  double cumulative_delta_v_m3 = 0.0;   // sum over the confirming run
  int windows = 0;
};

// Line inventory compensated for temperature and pressure departures from the
// fluid's reference state. Pipe-wall dilation is folded into the effective
// compressibility coefficient, so a single pair of coefficients covers both
// fluid and pipe response:
//   V_l = A * L * [1 + bT*(T - Tref) + bP*(P - Pref)],  A = pi*D^2/4
inline InventorySnapshot line_inventory(const PipelineProfile& profile,
                                        const FluidState& fluid,
                                        double mean_pressure_pa,
                                        double mean_temperature_k,
                                        double time_s = 0.0) {
  require_valid(fluid);
  if (!(profile.length_m > 0.0) || !(profile.inner_diameter_m > 0.0))
    throw InputError("line_inventory needs positive length and diameter");
  if (!std::isfinite(mean_pressure_pa) || !std::isfinite(mean_temperature_k))
    throw InputError("line_inventory: non-finite pressure or temperature");
  const double base = cross_section_area_m2(profile) * profile.length_m;
  const double factor =
      1.0 + fluid.thermal_expansion_per_k * (mean_temperature_k - fluid.reference_temperature_k) +
      fluid.compressibility_per_pa * (mean_pressure_pa - fluid.reference_pressure_pa);
  const double volume = base * factor;
  if (!(volume > 0.0))
    throw InputError("line_inventory: compensation drove volume non-positive");
  return {time_s, volume, mean_pressure_pa, mean_temperature_k};
}

// Trapezoidal integral of a flow series over [t0, t1]. The series is treated
// as piecewise linear, so constants and ramps integrate exactly and window
// endpoints may fall between samples.
inline double integrate_flow(const TimeSeries& series, double t0_s, double t1_s) {
  validate_series(series);
  if (series.channel != Channel::FlowM3s)
    throw InputError("integrate_flow expects a flow_m3_s series");
  const double dt = series.sample_interval_s;
  const double slack = 1e-9 * dt;
  if (t0_s < series.start_time_s - slack || t1_s > series.end_time_s() + slack || t1_s < t0_s)
    throw RangeError("integration window outside series span");

  auto clip = [&](double t) {
    return std::clamp(t, series.start_time_s, series.end_time_s());
  };
  const double a = clip(t0_s);
  const double b = clip(t1_s);
  if (b <= a) return 0.0;

  const auto n = series.values.size();
  const auto index_below = [&](double t) {
    const double pos = (t - series.start_time_s) / dt;
    return static_cast<std::size_t>(
        std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 1)));
  };

  std::size_t ia = index_below(a);
  const std::size_t ib = index_below(b);
  double integral = 0.0;
  double t_prev = a;
  double v_prev = series.value_at(a);
  // full samples strictly inside (a, b]
  for (std::size_t i = ia + 1; i <= ib && i < n; ++i) {
    const double t = series.time_at(i);
    if (t >= b) break;
    integral += 0.5 * (v_prev + series.values[i]) * (t - t_prev);
    t_prev = t;
    v_prev = series.values[i];
  }
  const double v_end = series.value_at(b);
  integral += 0.5 * (v_prev + v_end) * (b - t_prev);
  return integral;
}

// Windowed volume balance: metered flows minus the inventory change.
// Positive leakage_volume_m3 means product was lost from the line.
inline BalanceResult volume_balance(const TimeSeries& inlet_flow,
                                    const TimeSeries& outlet_flow,
                                    const InventorySnapshot& inventory_start,
                                    const InventorySnapshot& inventory_end,
                                    double t0_s, double t1_s) {
  if (t1_s < t0_s) throw RangeError("volume_balance: inverted window");
  const double tol = 1e-6 + 1e-9 * std::abs(t1_s);
  if (std::abs(inventory_start.time_s - t0_s) > tol ||
      std::abs(inventory_end.time_s - t1_s) > tol)
    throw RangeError("volume_balance: inventory snapshots do not match the window");
  BalanceResult r;
  r.t0_s = t0_s;
  r.t1_s = t1_s;
  r.v_in_m3 = integrate_flow(inlet_flow, t0_s, t1_s);
  r.v_out_m3 = integrate_flow(outlet_flow, t0_s, t1_s);
  r.delta_inventory_m3 = inventory_end.line_volume_m3 - inventory_start.line_volume_m3;
  r.leakage_volume_m3 = r.v_in_m3 - r.v_out_m3 - r.delta_inventory_m3;
  return r;
}

// Persistent-imbalance rule: alarm on the first run of `persistence_windows`
// consecutive windows with leakage above threshold. Single spikes are
// transients and stay silent.
inline std::optional<ImbalanceAlarm> detect_imbalance(
    const std::vector<BalanceResult>& results, double threshold_m3,
    int persistence_windows) {
  if (persistence_windows < 1) throw InputError("persistence_windows must be >= 1");
  int run = 0;
  double run_sum = 0.0;
  double run_start_time = 0.0;
  for (const auto& r : results) {
    if (r.leakage_volume_m3 > threshold_m3) {
      if (run == 0) run_start_time = r.t0_s;
      ++run;
      run_sum += r.leakage_volume_m3;
      if (run >= persistence_windows) {
        ImbalanceAlarm alarm;
        alarm.time_s = r.t1_s;
        alarm.first_exceedance_time_s = run_start_time;
        alarm.cumulative_delta_v_m3 = run_sum;
        alarm.windows = run;
        return alarm;
      }
    } else {
      run = 0;
      run_sum = 0.0;
    }
  }
  return std::nullopt;
}

}  // namespace lds
