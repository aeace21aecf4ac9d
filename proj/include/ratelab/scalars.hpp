#pragma once

#include <cmath>
#include <span>
#include <utility>

namespace ratelab {

// x log2(x), continuously extended by 0 at x = 0.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double binary_entropy_bits(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

inline double shannon_entropy_bits(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s -= xlog2x(v);
  return s;
}

// Variance of log2(p_j) under the distribution p itself:
//   sum_j p_j log2^2(p_j) - (sum_j p_j log2(p_j))^2,
// evaluated in centered two-pass form so near-uniform spectra do not lose
// the result to cancellation.
inline double log_spectrum_variance(std::span<const double> p) {
  double mean = 0.0;
  for (double v : p) {
    if (v > 0.0) mean += v * std::log2(v);
  }
  double variance = 0.0;
  for (double v : p) {
    if (v <= 0.0) continue;
    const double centered = std::log2(v) - mean;
    variance += v * centered * centered;
  }
  return variance;
}

struct GoldenResult {
  double x;
  double value;
};

// Golden-section minimization on [a, b]; assumes the function is unimodal
// there. Stops when the interval shrinks below xtol.
template <typename F>
GoldenResult golden_section_minimize(F&& f, double a, double b, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

template <typename F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double xtol) {
  auto neg = [&f](double x) { return -f(x); };
  GoldenResult r = golden_section_minimize(neg, a, b, xtol);
  return {r.x, -r.value};
}

}  // namespace ratelab
