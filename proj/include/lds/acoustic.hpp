#pragma once

#include <cmath>
#include <string_view>
#include <utility>

#include "lds/errors.hpp"

namespace lds {

// Leak hole against the local pipe section. static_pressure_pa is the
// pressure at the leak site; the pressure-drop model below assumes no-flow
// conditions, which is carried as a caveat in report metadata.
struct LeakGeometry {
  double hole_diameter_m = 0.0;    // D1
  double pipe_diameter_m = 0.0;    // Dp
  double static_pressure_pa = 0.0; // Ps
};

inline void require_valid(const LeakGeometry& g) {
  if (g.pipe_diameter_m <= 0.0)
    throw InputError("leak geometry: pipe diameter must be > 0");
  if (g.hole_diameter_m < 0.0 || g.hole_diameter_m > g.pipe_diameter_m)
    throw InputError("leak geometry: hole diameter must lie in [0, pipe diameter]");
  if (g.static_pressure_pa < 0.0)
    throw InputError("leak geometry: static pressure must be >= 0");
}

// Spatial attenuation with damping proportional to frequency squared:
// amplitude factor exp(-k * f^2 * d). reference_band_hz records the
// continuous-emission band of an established leak (175-750 kHz); those
// frequencies are far too damped to travel, so the band is metadata for
// reports, not a propagation model.
struct AttenuationModel {
  double damping_coefficient_s2_per_m = 0.0;              // k
  std::pair<double, double> reference_band_hz = {175e3, 750e3};
};

inline void require_valid(const AttenuationModel& m) {
  if (m.damping_coefficient_s2_per_m < 0.0)
    throw InputError("attenuation: damping coefficient must be >= 0");
  if (!(m.reference_band_hz.first < m.reference_band_hz.second))
    throw InputError("attenuation: band low must be below band high");
}

// Local pressure drop radiated by a leak hole (no-flow approximation):
//   dp = 0.3 * Ps * (D1/Dp)^2
inline double leak_pressure_drop(const LeakGeometry& g) {
  require_valid(g);
  const double ratio = g.hole_diameter_m / g.pipe_diameter_m;
  return 0.3 * g.static_pressure_pa * ratio * ratio;
}

// Smallest hole-to-pipe diameter ratio whose pressure drop still clears the
// sensor floor; leaks below it are undetectable by the pressure-wave method.
inline double min_detectable_hole_ratio(double static_pressure_pa,
                                        double sensor_floor_pa) {
  if (!(static_pressure_pa > 0.0))
    throw InputError("min_detectable_hole_ratio: static pressure must be > 0");
  if (sensor_floor_pa < 0.0)
    throw InputError("min_detectable_hole_ratio: sensor floor must be >= 0");
  return std::sqrt(sensor_floor_pa / (0.3 * static_pressure_pa));
}

// Amplitude surviving after distance_m at frequency_hz; in (0, 1].
inline double attenuation_factor(const AttenuationModel& model, double frequency_hz,
                                 double distance_m) {
  require_valid(model);
  if (frequency_hz < 0.0 || distance_m < 0.0)
    throw InputError("attenuation_factor: frequency and distance must be >= 0");
  return std::exp(-model.damping_coefficient_s2_per_m * frequency_hz * frequency_hz *
                  distance_m);
}

// Repair urgency classes for a confirmed leak.
enum class Severity { Urgent24To48h, Repair30d, Monitor };

inline const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Urgent24To48h: return "URGENT_24_48H";
    case Severity::Repair30d: return "REPAIR_30D";
    case Severity::Monitor: return "MONITOR";
  }
  return "?";
}

// Toolkit policy thresholds on the estimated hole ratio:
//   >= 0.1         URGENT_24_48H
//   [0.01, 0.1)    REPAIR_30D
//   < 0.01         MONITOR
// Anything flagged undetectable is monitored regardless of size estimate.
inline Severity classify_severity(double estimated_hole_ratio, bool detectable) {
  if (!(estimated_hole_ratio >= 0.0) || estimated_hole_ratio > 1.0)
    throw InputError("classify_severity: hole ratio must lie in [0, 1]");
  if (!detectable) return Severity::Monitor;
  if (estimated_hole_ratio >= 0.1) return Severity::Urgent24To48h;
  if (estimated_hole_ratio >= 0.01) return Severity::Repair30d;
  return Severity::Monitor;
}

}  // namespace lds
