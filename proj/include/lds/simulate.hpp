#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "lds/acoustic.hpp"
#include "lds/errors.hpp"
#include "lds/pipeline.hpp"
#include "lds/rng.hpp"
#include "lds/timeseries.hpp"

namespace lds {

inline constexpr double kOrificeDischargeCoefficient = 0.61;  // sharp-edged

struct PumpHarmonic {
  double frequency_hz = 0.0;
  double amplitude_pa = 0.0;
};

// Additive disturbances on top of the clean transient: white pressure noise,
// one pump sinusoid on the pressure channels, white flow noise, and an
// optional outlet-station clock offset (positive skew means the outlet clock
// runs late, so outlet channels report the signal delayed by skew).
struct NoiseSpec {
  double gaussian_sigma_pa = 0.0;
  PumpHarmonic pump_harmonic;
  double flow_sigma_m3_s = 0.0;
  double clock_skew_s = 0.0;
};

// Everything that defines one synthetic run. Identical scenarios (seed
// included) produce bit-identical telemetry.
struct LeakScenario {
  PipelineProfile profile;
  FluidState fluid;
  double baseline_flow_m3_s = 0.0;
  double inlet_pressure_pa = 0.0;
  double leak_chainage_m = 0.0;  // ground truth
  double leak_start_s = 0.0;
  double leak_hole_diameter_m = 0.0;  // 0 disables the leak
  double sample_rate_hz = 0.0;
  double duration_s = 0.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  // Shape of the negative pressure wave at each station: an instantaneous
  // step by default, a linear ramp over ramp_s when > 0.
  double ramp_s = 0.0;
  // Dominant frequency of the transient, used to scale the received step by
  // the attenuation model over the leak-to-station distance.
  double dominant_frequency_hz = 10.0;
  AttenuationModel attenuation;  // k = 0 by default: no attenuation
};

struct ScenarioTruth {
  double leak_chainage_m = 0.0;
  double leak_start_s = 0.0;
  double arrival_inlet_s = 0.0;
  double arrival_outlet_s = 0.0;
  double leak_rate_m3_s = 0.0;
};

struct ScenarioOutput {
  TimeSeries inlet_pressure;
  TimeSeries outlet_pressure;
  TimeSeries inlet_flow;
  TimeSeries outlet_flow;
  ScenarioTruth truth;
};

// Sharp-edged orifice outflow q = Cd * A * sqrt(2 * dp / rho).
inline double orifice_leak_rate(double hole_diameter_m, double pressure_drop_pa,
                                double density_kg_m3,
                                double discharge_coefficient = kOrificeDischargeCoefficient) {
  if (hole_diameter_m <= 0.0 || pressure_drop_pa <= 0.0) return 0.0;
  const double area = std::numbers::pi * hole_diameter_m * hole_diameter_m / 4.0;
  return discharge_coefficient * area * std::sqrt(2.0 * pressure_drop_pa / density_kg_m3);
}

// Inverse of orifice_leak_rate; handy when designing scenarios around a
// target leak rate.
inline double hole_diameter_for_leak_rate(double leak_rate_m3_s, double pressure_drop_pa,
                                          double density_kg_m3,
                                          double discharge_coefficient = kOrificeDischargeCoefficient) {
  if (leak_rate_m3_s <= 0.0) return 0.0;
  if (pressure_drop_pa <= 0.0 || density_kg_m3 <= 0.0)
    throw InputError("hole_diameter_for_leak_rate: need positive pressure and density");
  const double area = leak_rate_m3_s /
                      (discharge_coefficient * std::sqrt(2.0 * pressure_drop_pa / density_kg_m3));
  return std::sqrt(4.0 * area / std::numbers::pi);
}

inline void require_valid(const LeakScenario& s) {
  require_valid(s.profile);
  require_valid(s.fluid);
  require_valid(s.attenuation);
  if (!(s.sample_rate_hz > 0.0)) throw InputError("scenario: sample_rate_hz must be > 0");
  if (!(s.duration_s > 0.0)) throw InputError("scenario: duration_s must be > 0");
  if (s.leak_chainage_m < 0.0 || s.leak_chainage_m > s.profile.length_m)
    throw InputError("scenario: leak_chainage_m outside [0, length]");
  if (s.leak_start_s < 0.0 || s.leak_start_s > s.duration_s)
    throw InputError("scenario: leak_start_s outside [0, duration]");
  if (s.leak_hole_diameter_m < 0.0 || s.leak_hole_diameter_m > s.profile.inner_diameter_m)
    throw InputError("scenario: hole diameter outside [0, pipe diameter]");
  if (s.inlet_pressure_pa < 0.0) throw InputError("scenario: inlet pressure must be >= 0");
  if (s.noise.gaussian_sigma_pa < 0.0 || s.noise.flow_sigma_m3_s < 0.0 ||
      s.noise.pump_harmonic.amplitude_pa < 0.0 || s.noise.pump_harmonic.frequency_hz < 0.0)
    throw InputError("scenario: noise magnitudes must be >= 0");
  if (s.ramp_s < 0.0) throw InputError("scenario: ramp_s must be >= 0");
  if (s.dominant_frequency_hz < 0.0)
    throw InputError("scenario: dominant_frequency_hz must be >= 0");
}

// Frictionless hydrostatic pressure along the line from the inlet pressure
// and the elevation profile.
inline double static_pressure_at(const PipelineProfile& profile, const FluidState& fluid,
                                 double inlet_pressure_pa, double chainage_m) {
  const double dz = elevation_at(profile, 0.0) - elevation_at(profile, chainage_m);
  return inlet_pressure_pa + fluid.density_kg_m3 * kStandardGravity * dz;
}

inline std::vector<std::pair<double, double>> steady_state_profile(const LeakScenario& s) {
  require_valid(s);
  std::vector<std::pair<double, double>> out;
  out.reserve(s.profile.elevation_profile.size());
  for (const auto& [x, z] : s.profile.elevation_profile)
    out.emplace_back(x, static_pressure_at(s.profile, s.fluid, s.inlet_pressure_pa, x));
  return out;
}

// Synthesizes inlet/outlet pressure and flow telemetry for one scenario.
//
// The negative pressure wave is modelled as an attenuated step, not a full
// hydraulic transient: each station sits at its hydrostatic baseline until
// the wave arrives (travel time integrates 1/v over the velocity segments),
// then drops by the Eq-style local pressure drop scaled by attenuation at
// the dominant transient frequency. Flows split the orifice outflow
// linearly in chainage: the inlet speeds up by q*(L-x)/L, the outlet slows
// by q*x/L, so the settled inlet-outlet difference equals q exactly.
inline ScenarioOutput simulate(const LeakScenario& s) {
  require_valid(s);
  const double L = s.profile.length_m;
  const double x = s.leak_chainage_m;
  const double dt = 1.0 / s.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::floor(s.duration_s * s.sample_rate_hz)) + 1;

  const double p_leak = static_pressure_at(s.profile, s.fluid, s.inlet_pressure_pa, x);
  LeakGeometry geometry{s.leak_hole_diameter_m, s.profile.inner_diameter_m,
                        std::max(0.0, p_leak)};
  const double drop_at_leak = leak_pressure_drop(geometry);
  const double q_leak =
      orifice_leak_rate(s.leak_hole_diameter_m, std::max(0.0, p_leak), s.fluid.density_kg_m3);

  const double t_in = travel_time_from_inlet(s.profile, x);
  const double t_out = travel_time_to_outlet(s.profile, x);
  const double arrival_inlet = s.leak_start_s + t_in;
  const double arrival_outlet = s.leak_start_s + t_out;

  const double f = s.dominant_frequency_hz;
  const double step_inlet = drop_at_leak * attenuation_factor(s.attenuation, f, x);
  const double step_outlet = drop_at_leak * attenuation_factor(s.attenuation, f, L - x);

  const double p_base_inlet = s.inlet_pressure_pa;
  const double p_base_outlet = static_pressure_at(s.profile, s.fluid, s.inlet_pressure_pa, L);

  const double flow_step_inlet = q_leak * (L - x) / L;    // inlet speeds up
  const double flow_step_outlet = -q_leak * x / L;        // outlet slows down

  // One independent substream per channel, derived from the scenario seed in
  // a fixed order so streams stay reproducible.
  SplitMix64 seeder(s.seed);
  Rng rng_inlet_pressure(seeder.next());
  Rng rng_outlet_pressure(seeder.next());
  Rng rng_inlet_flow(seeder.next());
  Rng rng_outlet_flow(seeder.next());

  auto ramp_fraction = [&](double t_since_arrival) {
    if (t_since_arrival < 0.0) return 0.0;
    if (s.ramp_s <= 0.0 || t_since_arrival >= s.ramp_s) return 1.0;
    return t_since_arrival / s.ramp_s;
  };
  auto pump = [&](double t) {
    const auto& h = s.noise.pump_harmonic;
    if (h.amplitude_pa <= 0.0 || h.frequency_hz <= 0.0) return 0.0;
    return h.amplitude_pa * std::sin(2.0 * std::numbers::pi * h.frequency_hz * t);
  };

  auto make_series = [&](Channel channel, const std::string& station) {
    TimeSeries ts;
    ts.start_time_s = 0.0;
    ts.sample_interval_s = dt;
    ts.channel = channel;
    ts.station_id = station;
    ts.values.resize(n);
    return ts;
  };

  ScenarioOutput out;
  out.inlet_pressure = make_series(Channel::PressurePa, "inlet");
  out.outlet_pressure = make_series(Channel::PressurePa, "outlet");
  out.inlet_flow = make_series(Channel::FlowM3s, "inlet");
  out.outlet_flow = make_series(Channel::FlowM3s, "outlet");
  out.truth = {x, s.leak_start_s, arrival_inlet, arrival_outlet, q_leak};

  const double skew = s.noise.clock_skew_s;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double t_outlet_clock = t - skew;  // what the outlet station sees at sample k

    double p_in = p_base_inlet - step_inlet * ramp_fraction(t - arrival_inlet) + pump(t);
    double p_out = p_base_outlet - step_outlet * ramp_fraction(t_outlet_clock - arrival_outlet) +
                   pump(t_outlet_clock);
    if (s.noise.gaussian_sigma_pa > 0.0) {
      p_in += rng_inlet_pressure.normal(s.noise.gaussian_sigma_pa);
      p_out += rng_outlet_pressure.normal(s.noise.gaussian_sigma_pa);
    }
    out.inlet_pressure.values[k] = std::max(0.0, p_in);
    out.outlet_pressure.values[k] = std::max(0.0, p_out);

    double q_in = s.baseline_flow_m3_s + flow_step_inlet * ramp_fraction(t - arrival_inlet);
    double q_out = s.baseline_flow_m3_s +
                   flow_step_outlet * ramp_fraction(t_outlet_clock - arrival_outlet);
    if (s.noise.flow_sigma_m3_s > 0.0) {
      q_in += rng_inlet_flow.normal(s.noise.flow_sigma_m3_s);
      q_out += rng_outlet_flow.normal(s.noise.flow_sigma_m3_s);
    }
    out.inlet_flow.values[k] = q_in;
    out.outlet_flow.values[k] = q_out;
  }
  return out;
}

}  // namespace lds
