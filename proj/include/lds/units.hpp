#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "lds/errors.hpp"

namespace lds {

// Operator-facing unit suffixes, accepted at the CLI boundary only; the
// library works in strict SI (m, Pa, s, K, m3/s). A bare number is already
// SI.
//
//   length:       m (default), km
//   pressure:     pa/Pa (default), bar, mbar
//   temperature:  k/K (default), c/C (degrees Celsius)

namespace units_detail {

struct Parsed {
  double value = 0.0;
  std::string_view suffix;
};

inline Parsed split_number(std::string_view text, const char* what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr == first)
    throw InputError(std::string("cannot parse ") + what + " from '" + std::string(text) + "'");
  return {value, std::string_view(res.ptr, static_cast<std::size_t>(last - res.ptr))};
}

}  // namespace units_detail

inline double parse_length_m(std::string_view text) {
  const auto [value, suffix] = units_detail::split_number(text, "length");
  if (suffix.empty() || suffix == "m") return value;
  if (suffix == "km") return value * 1000.0;
  throw InputError("unknown length unit '" + std::string(suffix) + "' (use m or km)");
}

inline double parse_pressure_pa(std::string_view text) {
  const auto [value, suffix] = units_detail::split_number(text, "pressure");
  if (suffix.empty() || suffix == "pa" || suffix == "Pa") return value;
  if (suffix == "bar") return value * 1e5;
  if (suffix == "mbar") return value * 100.0;
  throw InputError("unknown pressure unit '" + std::string(suffix) + "' (use Pa, bar or mbar)");
}

inline double parse_temperature_k(std::string_view text) {
  const auto [value, suffix] = units_detail::split_number(text, "temperature");
  if (suffix.empty() || suffix == "k" || suffix == "K") return value;
  if (suffix == "c" || suffix == "C") return value + 273.15;
  throw InputError("unknown temperature unit '" + std::string(suffix) + "' (use K or C)");
}

}  // namespace lds
