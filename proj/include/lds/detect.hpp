#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lds/errors.hpp"
#include "lds/timeseries.hpp"
#include "lds/wavelet.hpp"

namespace lds {

enum class Polarity { Drop, Rise };

inline const char* polarity_name(Polarity p) {
  return p == Polarity::Drop ? "drop" : "rise";
}

struct OnsetEvent {
  std::string station_id;
  double onset_time_s = 0.0;
  Polarity polarity = Polarity::Drop;
  double strength = 0.0;  // peak detail magnitude / noise scale
};

// Onset detector knobs. The detail coefficients are taken from the
// undecimated transform at detection_level; level-1 coefficients only fix
// the noise scale. A single stride-1 haar difference of a clean step is one
// hot coefficient, which the persistence rule would always reject and which
// sits below the universal threshold for modest steps, so detection happens
// at a coarser scale where a step spreads across several coefficients and
// gains amplitude over the noise.
struct DetectionConfig {
  std::string wavelet = "haar";
  int detection_level = 3;     // scale the exceedance test runs at
  double lambda = 1.0;         // threshold multiplier
  int persistence = 2;         // consecutive exceedances required
  double time_offset_s = 0.0;  // added to onset times (station clock correction)
};

namespace detect_detail {

inline double median_abs(std::vector<double> v) {
  for (auto& x : v) x = std::abs(x);
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const auto lower = std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + *lower);
  }
  return m;
}

// Response of the effective highpass filter to a unit downward step placed
// at offset j inside its window. The peak fixes both the coefficient-index
// to onset-sample mapping and the sign convention for polarity.
struct StepTemplate {
  std::size_t peak_offset = 0;
  double peak_response = 0.0;  // sign convention: >0 means drop gives positive peak
};

inline StepTemplate step_template(const std::vector<double>& filter) {
  StepTemplate t;
  double best = 0.0;
  // step at offset j: x[k] = 0 for k < j, -1 for k >= j
  double tail = 0.0;  // sum of filter[k] for k >= j, walked from the right
  std::vector<double> resp(filter.size() + 1, 0.0);
  for (std::size_t j = filter.size(); j-- > 0;) {
    tail += filter[j];
    resp[j] = -tail;
  }
  for (std::size_t j = 0; j < resp.size(); ++j) {
    if (std::abs(resp[j]) > best) {
      best = std::abs(resp[j]);
      t.peak_offset = j;
      t.peak_response = resp[j];
    }
  }
  return t;
}

}  // namespace detect_detail

// Wavelet onset detector: universal threshold tau = lambda*sigma*sqrt(2 ln n)
// with the robust noise scale sigma = median(|level-1 details|)/0.6745.
// An onset is a run of at least `persistence` consecutive detection-level
// exceedances; runs closer than the filter support merge. The onset time is
// the run's peak coefficient shifted by the filter's step-response peak, and
// polarity follows the sign of that peak against the step template.
inline std::vector<OnsetEvent> detect_onsets(const TimeSeries& signal,
                                             const DetectionConfig& config) {
  validate_series(signal);
  const std::size_t n = signal.values.size();
  if (n < 8) throw InputError("detect_onsets: signal needs at least 8 samples");
  if (config.detection_level < 1 || config.persistence < 1 || config.lambda <= 0.0)
    throw InputError("detect_onsets: bad detection parameters");

  const WaveletFilters filters = wavelet_filters(config.wavelet);
  const auto level1 = stationary_highpass_filter(filters, 1);
  const auto level_j = stationary_highpass_filter(filters, config.detection_level);
  if (level_j.size() >= n)
    throw InputError("detect_onsets: signal shorter than the detection filter support");

  const auto d1 = stationary_detail(signal.values, level1);
  const auto dj = stationary_detail(signal.values, level_j);
  // exclude replicated-edge tail from the noise estimate
  const std::size_t d1_valid = n - (level1.size() - 1);
  const double sigma =
      detect_detail::median_abs({d1.begin(), d1.begin() + static_cast<std::ptrdiff_t>(d1_valid)}) /
      0.6745;
  double tau = config.lambda * sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
  // Convolving a constant stretch cancels only to a few ulp, so a noiseless
  // signal would exceed tau = 0 everywhere; keep the threshold above that
  // residue.
  double max_abs_x = 0.0;
  for (double v : signal.values) max_abs_x = std::max(max_abs_x, std::abs(v));
  tau = std::max(tau, 1e-9 * max_abs_x);

  const auto tmpl = detect_detail::step_template(level_j);
  const std::size_t support = level_j.size();
  const std::size_t dj_valid = n - (support - 1);

  struct Run {
    std::size_t first = 0, last = 0;
    std::size_t peak = 0;
    double peak_value = 0.0;
    std::size_t count = 0;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < dj_valid; ++i) {
    if (!(std::abs(dj[i]) > tau)) continue;
    if (!runs.empty() && i - runs.back().last <= support) {
      Run& r = runs.back();
      r.last = i;
      ++r.count;
      if (std::abs(dj[i]) > std::abs(r.peak_value)) {
        r.peak = i;
        r.peak_value = dj[i];
      }
    } else {
      runs.push_back({i, i, i, dj[i], 1});
    }
  }

  std::vector<OnsetEvent> events;
  for (const auto& r : runs) {
    if (r.count < static_cast<std::size_t>(config.persistence)) continue;
    OnsetEvent e;
    e.station_id = signal.station_id;
    const std::size_t onset_index = std::min(r.peak + tmpl.peak_offset, n - 1);
    e.onset_time_s = signal.time_at(onset_index) + config.time_offset_s;
    e.polarity = (r.peak_value * tmpl.peak_response > 0.0) ? Polarity::Drop : Polarity::Rise;
    e.strength = sigma > 0.0 ? std::abs(r.peak_value) / sigma
                             : std::numeric_limits<double>::infinity();
    events.push_back(std::move(e));
  }
  return events;
}

struct EventPair {
  OnsetEvent inlet;
  OnsetEvent outlet;
};

struct PairingResult {
  std::vector<EventPair> pairs;           // chronological by inlet onset
  std::vector<OnsetEvent> unpaired_inlet;
  std::vector<OnsetEvent> unpaired_outlet;
};

// Greedy chronological matching: walk inlet events in time order, each takes
// the nearest-in-time unmatched outlet event of the same polarity within
// max_lag_s. Callers pass max_lag_s = line travel time + margin.
inline PairingResult pair_events(std::vector<OnsetEvent> inlet_events,
                                 std::vector<OnsetEvent> outlet_events,
                                 double max_lag_s) {
  if (!(max_lag_s > 0.0)) throw InputError("pair_events: max_lag_s must be > 0");
  auto by_time = [](const OnsetEvent& a, const OnsetEvent& b) {
    return a.onset_time_s < b.onset_time_s;
  };
  std::sort(inlet_events.begin(), inlet_events.end(), by_time);
  std::sort(outlet_events.begin(), outlet_events.end(), by_time);

  PairingResult result;
  std::vector<bool> taken(outlet_events.size(), false);
  for (const auto& in : inlet_events) {
    std::size_t best = outlet_events.size();
    double best_lag = max_lag_s;
    for (std::size_t j = 0; j < outlet_events.size(); ++j) {
      if (taken[j] || outlet_events[j].polarity != in.polarity) continue;
      const double lag = std::abs(outlet_events[j].onset_time_s - in.onset_time_s);
      if (lag <= best_lag) {
        best_lag = lag;
        best = j;
      }
    }
    if (best < outlet_events.size()) {
      taken[best] = true;
      result.pairs.push_back({in, outlet_events[best]});
    } else {
      result.unpaired_inlet.push_back(in);
    }
  }
  for (std::size_t j = 0; j < outlet_events.size(); ++j)
    if (!taken[j]) result.unpaired_outlet.push_back(outlet_events[j]);
  return result;
}

}  // namespace lds
