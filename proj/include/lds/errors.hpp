#pragma once

#include <stdexcept>

namespace lds {

// Rejected input: invalid domain values, malformed files, schema violations.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested window or time lies outside the available data span.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// |t_inlet - t_outlet| exceeds the line's end-to-end travel time; the fix
// would land outside the pipeline. Usually means a wrong pairing or a wrong
// wave-speed profile.
struct InfeasibleTimeDifference : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lds
