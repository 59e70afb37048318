#pragma once

// Slow-but-simple reference implementations used to pin down expected values
// independently of the library's own numerics.  Everything here trades speed
// for obvious correctness: plain midpoint Riemann sums, direct formula
// evaluation, no adaptivity.

#include <cmath>
#include <cstdint>
#include <functional>

namespace oracles {

/// Midpoint Riemann sum of f over (lo, hi) with the given step.
inline double riemann(const std::function<double(double)>& f, double lo, double hi,
                      double step) {
  const std::int64_t n = static_cast<std::int64_t>((hi - lo) / step);
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) acc += f(lo + (static_cast<double>(i) + 0.5) * step);
  return acc * step;
}

/// Midpoint Riemann sum on a logarithmic grid over (lo, hi); suited to
/// integrands with power-law behaviour near zero.
inline double riemann_log(const std::function<double(double)>& f, double lo, double hi,
                          int n) {
  const double llo = std::log(lo), lhi = std::log(hi);
  const double step = (lhi - llo) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(llo + (i + 0.5) * step);
    acc += f(t) * t;  // dt = t d(log t)
  }
  return acc * step;
}

inline double sq(double x) { return x * x; }

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.5066282746310002;

inline double normal_pdf(double x, double mu = 0.0, double sigma = 1.0) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

inline double normal_cdf(double x, double mu = 0.0, double sigma = 1.0) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

}  // namespace oracles
