#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lds/errors.hpp"
#include "lds/timeseries.hpp"

namespace lds {

// Orthonormal analysis filter pair. Synthesis is the adjoint of analysis,
// which for orthonormal filters is also the inverse, so only the analysis
// pair is stored.
struct WaveletFilters {
  std::string name;
  std::vector<double> lo;  // scaling (lowpass)
  std::vector<double> hi;  // wavelet (highpass)
};

// haar:  lo = (1,1)/sqrt(2), hi = (1,-1)/sqrt(2)
// db4:   4-tap Daubechies pair, hi[k] = (-1)^k * lo[3-k]
inline WaveletFilters wavelet_filters(std::string_view name) {
  if (name == "haar") {
    const double s = 1.0 / std::sqrt(2.0);
    return {"haar", {s, s}, {s, -s}};
  }
  if (name == "db4") {
    const double sqrt3 = std::sqrt(3.0);
    const double norm = 4.0 * std::sqrt(2.0);
    const std::vector<double> lo = {(1.0 + sqrt3) / norm, (3.0 + sqrt3) / norm,
                                    (3.0 - sqrt3) / norm, (1.0 - sqrt3) / norm};
    std::vector<double> hi(4);
    for (int k = 0; k < 4; ++k) hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * lo[3 - k];
    return {"db4", lo, hi};
  }
  throw InputError("unknown wavelet '" + std::string(name) + "' (have: haar, db4)");
}

// Pyramid decomposition of one channel. Coefficient counts over all levels
// sum to the padded length, and for orthonormal filters total energy is
// preserved.
struct WaveletDecomposition {
  int levels = 0;
  std::vector<std::vector<double>> detail_coeffs;  // level 1..J, lengths p/2, p/4, ...
  std::vector<double> approx_coeffs;               // final approximation, length p/2^J
  std::size_t original_length = 0;
  std::size_t padded_length = 0;                   // next power of two, zero padded
  std::string wavelet_name;
};

namespace wavelet_detail {

// One periodized analysis step: x (even length) -> approx, detail of half size.
inline void analysis_step(const std::vector<double>& x, const WaveletFilters& f,
                          std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  const std::size_t taps = f.lo.size();
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
      const double v = x[(2 * i + k) % n];
      a += f.lo[k] * v;
      d += f.hi[k] * v;
    }
    approx[i] = a;
    detail[i] = d;
  }
}

// Adjoint of analysis_step; exact inverse for orthonormal filters.
inline std::vector<double> synthesis_step(const std::vector<double>& approx,
                                          const std::vector<double>& detail,
                                          const WaveletFilters& f) {
  const std::size_t half = approx.size();
  const std::size_t n = 2 * half;
  const std::size_t taps = f.lo.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t k = 0; k < taps; ++k) {
      const std::size_t j = (2 * i + k) % n;
      x[j] += f.lo[k] * approx[i] + f.hi[k] * detail[i];
    }
  }
  return x;
}

}  // namespace wavelet_detail

inline WaveletDecomposition dwt(std::span<const double> signal,
                                std::string_view wavelet, int levels) {
  if (levels < 1) throw InputError("dwt: levels must be >= 1");
  if (signal.size() < 2) throw InputError("dwt: signal needs at least 2 samples");
  const WaveletFilters filters = wavelet_filters(wavelet);

  const std::size_t padded = std::bit_ceil(signal.size());
  const int max_levels = std::countr_zero(padded);
  if (levels > max_levels)
    throw InputError("dwt: " + std::to_string(levels) + " levels exceed log2 of padded length " +
                     std::to_string(padded));

  WaveletDecomposition out;
  out.levels = levels;
  out.original_length = signal.size();
  out.padded_length = padded;
  out.wavelet_name = filters.name;

  std::vector<double> approx(signal.begin(), signal.end());
  approx.resize(padded, 0.0);
  for (int level = 0; level < levels; ++level) {
    std::vector<double> next_approx, detail;
    wavelet_detail::analysis_step(approx, filters, next_approx, detail);
    out.detail_coeffs.push_back(std::move(detail));
    approx = std::move(next_approx);
  }
  out.approx_coeffs = std::move(approx);
  return out;
}

inline WaveletDecomposition dwt(const TimeSeries& signal, std::string_view wavelet,
                                int levels) {
  validate_series(signal);
  return dwt(std::span<const double>(signal.values), wavelet, levels);
}

// Reconstructs the padded input; callers truncate to original_length.
inline std::vector<double> idwt(const WaveletDecomposition& d) {
  if (d.levels < 1 || d.detail_coeffs.size() != static_cast<std::size_t>(d.levels))
    throw InputError("idwt: inconsistent level count");
  const WaveletFilters filters = wavelet_filters(d.wavelet_name);
  std::size_t expect = d.padded_length >> d.levels;
  if (d.approx_coeffs.size() != expect)
    throw InputError("idwt: approximation length mismatch");
  std::vector<double> x = d.approx_coeffs;
  for (int level = d.levels - 1; level >= 0; --level) {
    const auto& detail = d.detail_coeffs[static_cast<std::size_t>(level)];
    if (detail.size() != x.size())
      throw InputError("idwt: detail length mismatch at level " + std::to_string(level + 1));
    x = wavelet_detail::synthesis_step(x, detail, filters);
  }
  return x;
}

// Effective filter of one level of the undecimated (a trous) transform:
//   eff_hi(j) = lo * up(lo,2) * ... * up(lo,2^{j-2}) * up(hi,2^{j-1})
// Stride-1 convolution with this filter gives shift-invariant detail
// coefficients, which onset detection needs (the decimated transform can
// miss a step aligned to an even sample entirely).
inline std::vector<double> stationary_highpass_filter(const WaveletFilters& f,
                                                      int level) {
  if (level < 1) throw InputError("stationary filter: level must be >= 1");
  auto upsample = [](const std::vector<double>& v, std::size_t factor) {
    std::vector<double> out((v.size() - 1) * factor + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) out[i * factor] = v[i];
    return out;
  };
  auto convolve = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  std::vector<double> eff = {1.0};
  for (int j = 1; j < level; ++j)
    eff = convolve(eff, upsample(f.lo, std::size_t{1} << (j - 1)));
  return convolve(eff, upsample(f.hi, std::size_t{1} << (level - 1)));
}

// d[i] = sum_k filter[k] * x[i+k], with edge replication beyond the ends so
// constant tails produce zero detail instead of boundary spikes.
inline std::vector<double> stationary_detail(std::span<const double> x,
                                             const std::vector<double>& filter) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n == 0) return d;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < filter.size(); ++k) {
      const std::size_t idx = std::min(i + k, n - 1);
      acc += filter[k] * x[idx];
    }
    d[i] = acc;
  }
  return d;
}

}  // namespace lds
