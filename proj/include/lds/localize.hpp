#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "lds/errors.hpp"
#include "lds/pipeline.hpp"

namespace lds {

// A localization fix. chainage_m is measured from the inlet station;
// time_difference_s is t_inlet - t_outlet (a later inlet arrival puts the
// leak nearer the outlet).
struct LeakFix {
  double chainage_m = 0.0;
  double time_difference_s = 0.0;
  std::string wave_speed_used;
  double confidence = 1.0;
};

struct LocalizationError {
  double absolute_m = 0.0;
  double relative_to_length = 0.0;  // fraction of line length
};

// Closed form for a uniform wave speed:
//   x = 0.5 * (L + v * (t_inlet - t_outlet))
inline LeakFix localize_uniform(double t_inlet_s, double t_outlet_s, double length_m,
                                double wave_speed_m_s) {
  if (!(wave_speed_m_s > 0.0)) throw InputError("localize_uniform: wave speed must be > 0");
  if (!(length_m > 0.0)) throw InputError("localize_uniform: length must be > 0");
  const double dt = t_inlet_s - t_outlet_s;
  const double max_dt = length_m / wave_speed_m_s;
  if (std::abs(dt) > max_dt)
    throw InfeasibleTimeDifference(
        "time difference " + std::to_string(dt) + " s exceeds line travel time " +
        std::to_string(max_dt) + " s; wrong pairing or wrong wave speed");
  LeakFix fix;
  fix.time_difference_s = dt;
  fix.chainage_m = std::clamp(0.5 * (length_m + wave_speed_m_s * dt), 0.0, length_m);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "uniform %.6g m/s", wave_speed_m_s);
  fix.wave_speed_used = buf;
  return fix;
}

// Variable wave speed: solve T_in(x) - T_out(x) = dt for x, where T_in is
// the travel time to the inlet and T_out to the outlet. The left side is
// strictly increasing in x, so bisection converges unconditionally; run it
// well past the documented 0.1 m tolerance.
inline LeakFix localize_profile(double t_inlet_s, double t_outlet_s,
                                const PipelineProfile& profile) {
  require_valid(profile);
  const double dt = t_inlet_s - t_outlet_s;
  const double total = total_travel_time(profile);
  if (std::abs(dt) > total)
    throw InfeasibleTimeDifference(
        "time difference " + std::to_string(dt) + " s exceeds line travel time " +
        std::to_string(total) + " s; wrong pairing or wrong velocity profile");

  auto imbalance = [&](double x) {
    // T_in(x) - T_out(x) = 2*T_in(x) - total
    return 2.0 * travel_time_from_inlet(profile, x) - total;
  };
  double lo = 0.0, hi = profile.length_m;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-4; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (imbalance(mid) < dt)
      lo = mid;
    else
      hi = mid;
  }

  LeakFix fix;
  fix.time_difference_s = dt;
  fix.chainage_m = 0.5 * (lo + hi);
  fix.wave_speed_used = "profile with " + std::to_string(profile.velocity_segments.size()) +
                        " velocity segment(s)";
  return fix;
}

inline LocalizationError localization_error(double fix_chainage_m,
                                            double truth_chainage_m,
                                            double length_m) {
  LocalizationError e;
  e.absolute_m = std::abs(fix_chainage_m - truth_chainage_m);
  e.relative_to_length = length_m > 0.0 ? e.absolute_m / length_m
                                        : std::numeric_limits<double>::quiet_NaN();
  return e;
}

}  // namespace lds
