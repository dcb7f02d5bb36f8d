#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "lds/errors.hpp"

namespace lds {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

// One stretch of line with a constant pressure-wave speed. Wave speed varies
// along a heated line with the temperature of the product, so the profile
// carries it piecewise instead of deriving it from a single fluid state.
struct VelocitySegment {
  double start_chainage_m = 0.0;
  double end_chainage_m = 0.0;
  double wave_speed_m_s = 0.0;
};

// Geometry, material and wave-speed description of one pipeline.
// Chainage is measured in metres from the inlet station.
struct PipelineProfile {
  double length_m = 0.0;
  double inner_diameter_m = 0.0;
  double wall_thickness_m = 0.0;
  double wall_elastic_modulus_pa = 0.0;
  std::vector<std::pair<double, double>> elevation_profile;  // (chainage_m, elevation_m)
  std::vector<VelocitySegment> velocity_segments;            // must cover [0, length_m]
};

// Fluid density/elasticity plus the compensation coefficients used by the
// line-inventory calculation.
struct FluidState {
  double density_kg_m3 = 0.0;
  double bulk_modulus_pa = 0.0;
  double thermal_expansion_per_k = 0.0;
  double compressibility_per_pa = 0.0;
  double reference_temperature_k = 0.0;
  double reference_pressure_pa = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string message) {
    ok = false;
    violations.push_back(std::move(message));
  }
};

namespace detail {
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}
}  // namespace detail

// Report-only structural check; never throws. The tolerance absorbs unit
// conversions at the CLI boundary (61.48 km -> 61480.000000000004 m).
inline ValidationReport validate_profile(const PipelineProfile& p) {
  ValidationReport report;
  const double tol = 1e-9 * std::max(1.0, std::abs(p.length_m));

  if (!(p.length_m > 0.0)) report.fail("length_m must be > 0");
  if (!(p.inner_diameter_m > 0.0)) report.fail("inner_diameter_m must be > 0");
  if (!(p.wall_thickness_m > 0.0)) report.fail("wall_thickness_m must be > 0");
  if (!(p.wall_elastic_modulus_pa > 0.0))
    report.fail("wall_elastic_modulus_pa must be > 0");

  if (p.velocity_segments.empty()) {
    report.fail("velocity_segments empty");
  } else {
    if (std::abs(p.velocity_segments.front().start_chainage_m) > tol)
      report.fail("velocity_segments must start at chainage 0, got " +
                  detail::num(p.velocity_segments.front().start_chainage_m));
    for (std::size_t i = 0; i < p.velocity_segments.size(); ++i) {
      const auto& seg = p.velocity_segments[i];
      if (!(seg.wave_speed_m_s > 0.0))
        report.fail("segment " + std::to_string(i) + " wave speed must be > 0");
      if (!(seg.end_chainage_m > seg.start_chainage_m + tol))
        report.fail("segment " + std::to_string(i) + " has non-positive extent");
      if (i + 1 < p.velocity_segments.size()) {
        const double next = p.velocity_segments[i + 1].start_chainage_m;
        if (next > seg.end_chainage_m + tol)
          report.fail("velocity_segments gap over [" + detail::num(seg.end_chainage_m) +
                      ", " + detail::num(next) + "] m");
        else if (next < seg.end_chainage_m - tol)
          report.fail("velocity_segments overlap over [" + detail::num(next) + ", " +
                      detail::num(seg.end_chainage_m) + "] m");
      }
    }
    if (std::abs(p.velocity_segments.back().end_chainage_m - p.length_m) > tol)
      report.fail("velocity_segments end at " +
                  detail::num(p.velocity_segments.back().end_chainage_m) +
                  " m, expected length " + detail::num(p.length_m) + " m");
  }

  if (p.elevation_profile.size() < 2) {
    report.fail("elevation_profile needs at least two points");
  } else {
    if (std::abs(p.elevation_profile.front().first) > tol)
      report.fail("elevation_profile must start at chainage 0");
    if (std::abs(p.elevation_profile.back().first - p.length_m) > tol)
      report.fail("elevation_profile must end at the line length");
    for (std::size_t i = 1; i < p.elevation_profile.size(); ++i)
      if (!(p.elevation_profile[i].first > p.elevation_profile[i - 1].first))
        report.fail("elevation_profile chainages not strictly increasing at index " +
                    std::to_string(i));
    for (const auto& [x, z] : p.elevation_profile)
      if (!std::isfinite(x) || !std::isfinite(z))
        report.fail("elevation_profile contains non-finite entry");
  }
  return report;
}

inline void require_valid(const PipelineProfile& p) {
  const auto report = validate_profile(p);
  if (!report.ok) throw InputError("invalid pipeline profile: " + report.violations.front());
}

inline void require_valid(const FluidState& f) {
  if (!(f.density_kg_m3 > 0.0) || !(f.bulk_modulus_pa > 0.0) ||
      !(f.reference_temperature_k > 0.0) || !(f.reference_pressure_pa > 0.0) ||
      f.thermal_expansion_per_k < 0.0 || f.compressibility_per_pa < 0.0)
    throw InputError("invalid fluid state");
}

// Pressure-wave speed in a fluid-filled elastic pipe (Korteweg, thin wall):
//   v = sqrt( (K/rho) / (1 + K*D/(E*e)) )
// Rigid-wall limit E*e >> K*D reduces to sqrt(K/rho).
inline double wave_speed(const FluidState& fluid, const PipelineProfile& profile) {
  require_valid(fluid);
  if (!(profile.inner_diameter_m > 0.0) || !(profile.wall_thickness_m > 0.0) ||
      !(profile.wall_elastic_modulus_pa > 0.0))
    throw InputError("wave_speed needs positive diameter, wall thickness and modulus");
  const double compliance = 1.0 + fluid.bulk_modulus_pa * profile.inner_diameter_m /
                                      (profile.wall_elastic_modulus_pa * profile.wall_thickness_m);
  const double v = std::sqrt(fluid.bulk_modulus_pa / fluid.density_kg_m3 / compliance);
  if (!std::isfinite(v) || !(v > 0.0))
    throw InputError("wave_speed: degenerate inputs give non-finite speed");
  return v;
}

inline double wave_speed_at(const PipelineProfile& p, double chainage_m) {
  if (p.velocity_segments.empty()) throw InputError("profile has no velocity segments");
  const double x = std::clamp(chainage_m, 0.0, p.length_m);
  for (const auto& seg : p.velocity_segments)
    if (x < seg.end_chainage_m) return seg.wave_speed_m_s;
  return p.velocity_segments.back().wave_speed_m_s;
}

// Time for a pressure wave to travel from chainage x to the inlet (chainage 0):
// integral of ds/v(s) over [0, x]. Piecewise-constant speed makes this exact.
inline double travel_time_from_inlet(const PipelineProfile& p, double chainage_m) {
  const double x = std::clamp(chainage_m, 0.0, p.length_m);
  double t = 0.0;
  for (const auto& seg : p.velocity_segments) {
    const double lo = std::max(0.0, seg.start_chainage_m);
    const double hi = std::min(x, seg.end_chainage_m);
    if (hi > lo) t += (hi - lo) / seg.wave_speed_m_s;
  }
  return t;
}

inline double total_travel_time(const PipelineProfile& p) {
  return travel_time_from_inlet(p, p.length_m);
}

inline double travel_time_to_outlet(const PipelineProfile& p, double chainage_m) {
  return total_travel_time(p) - travel_time_from_inlet(p, chainage_m);
}

inline double elevation_at(const PipelineProfile& p, double chainage_m) {
  const auto& ep = p.elevation_profile;
  if (ep.empty()) throw InputError("profile has no elevation points");
  const double x = std::clamp(chainage_m, ep.front().first, ep.back().first);
  for (std::size_t i = 1; i < ep.size(); ++i) {
    if (x <= ep[i].first) {
      const double span = ep[i].first - ep[i - 1].first;
      const double frac = span > 0.0 ? (x - ep[i - 1].first) / span : 0.0;
      return ep[i - 1].second + frac * (ep[i].second - ep[i - 1].second);
    }
  }
  return ep.back().second;
}

inline double cross_section_area_m2(const PipelineProfile& p) {
  return std::numbers::pi * p.inner_diameter_m * p.inner_diameter_m / 4.0;
}

}  // namespace lds
