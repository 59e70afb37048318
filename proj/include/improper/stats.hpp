#pragma once

// Normal-distribution utilities and a Kolmogorov-Smirnov test.  The inverse
// CDF is Wichura's PPND16 rational approximation (~1e-16 relative accuracy),
// chosen so that sampling via inverse transform is bit-identical across
// platforms and standard libraries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace improper::stats {

inline double normal_pdf(double x, double mean = 0.0, double sd = 1.0) {
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  const double z = (x - mean) / sd;
  return kInvSqrt2Pi / sd * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double x, double mean = 0.0, double sd = 1.0) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

/// Quantile function of the standard normal distribution (PPND16).
/// Domain (0, 1); the endpoints map to -inf/+inf.
inline double inverse_normal_cdf(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("inverse_normal_cdf requires p in [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

/// Deterministic stream of normal variates: 64-bit Mersenne twister uniforms
/// pushed through the inverse CDF.  Same seed, same sequence, everywhere.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double standard() {
    // 52 uniform bits, centred: k + 0.5 is exact for k < 2^52, so u lies
    // strictly inside (0, 1) with extremes 2^-53 and 1 - 2^-53.
    const double u =
        (static_cast<double>(rng_() >> 12) + 0.5) * (1.0 / 4503599627370496.0);
    return inverse_normal_cdf(u);
  }

  double operator()(double mean, double sd) { return mean + sd * standard(); }

 private:
  std::mt19937_64 rng_;
};

/// Upper tail of the Kolmogorov distribution: Q(lambda) = P(K > lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsReport {
  double statistic = 0.0;  // sup distance between empirical and reference CDF
  double p_value = 0.0;    // asymptotic, with the small-sample correction
  double alpha = 0.0;
  bool pass = false;  // true when the sample is compatible with the reference
};

/// One-sample KS test of xs against Normal(mean, sd).
inline KsReport ks_against_normal(std::vector<double> xs, double mean, double sd,
                                  double alpha = 0.01) {
  if (xs.size() < 2) throw std::invalid_argument("KS test needs at least two samples");
  if (!(sd > 0.0)) throw std::invalid_argument("KS reference needs a positive sd");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = normal_cdf(xs[i], mean, sd);
    const double lo = cdf - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - cdf;
    d = std::max({d, lo, hi});
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  KsReport report;
  report.statistic = d;
  report.p_value = kolmogorov_q(lambda);
  report.alpha = alpha;
  report.pass = report.p_value >= alpha;
  return report;
}

}  // namespace improper::stats
