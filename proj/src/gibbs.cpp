#include "improper/gibbs.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "improper/csv.hpp"

namespace improper::gibbs {

namespace {

double sample_variance(const double* xs, int n) {
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += xs[i];
  mean /= n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += (xs[i] - mean) * (xs[i] - mean);
  return acc / (n - 1);
}

}  // namespace

ChainTrace run_gibbs(const GibbsConfig& cfg) {
  if (cfg.n_iter < 1) throw std::invalid_argument("n_iter must be at least 1");
  if (cfg.prior.kind == Prior::Kind::gaussian && !(cfg.prior.tau2 > 0.0 && cfg.prior.kappa2 > 0.0))
    throw std::invalid_argument("gaussian prior variances must be positive");

  stats::NormalStream noise(cfg.seed);
  ChainTrace trace;
  trace.config = cfg;
  trace.theta1.reserve(cfg.n_iter);
  trace.theta2.reserve(cfg.n_iter);
  trace.delta.reserve(cfg.n_iter);

  double t1 = cfg.init_theta1;
  double t2 = cfg.init_theta2;
  const bool flat = cfg.prior.kind == Prior::Kind::flat;
  const double tau2 = cfg.prior.tau2, kappa2 = cfg.prior.kappa2;
  for (int t = 0; t < cfg.n_iter; ++t) {
    if (flat) {
      t1 = noise(cfg.y - t2, 1.0);
      t2 = noise(cfg.y - t1, 1.0);
    } else {
      t1 = noise(tau2 * (cfg.y - t2) / (1.0 + tau2), std::sqrt(tau2 / (1.0 + tau2)));
      t2 = noise(kappa2 * (cfg.y - t1) / (1.0 + kappa2), std::sqrt(kappa2 / (1.0 + kappa2)));
    }
    trace.theta1.push_back(t1);
    trace.theta2.push_back(t2);
    trace.delta.push_back(t1 + t2);
  }
  return trace;
}

DriftReport drift_diagnostic(const ChainTrace& trace, int window) {
  const int n = static_cast<int>(trace.theta1.size());
  if (window < 1 || window > n / 4)
    throw std::invalid_argument("window must satisfy 1 <= window <= n_iter/4");

  DriftReport report;
  for (int start = 0; start + window <= n; start += window)
    report.window_variances.push_back(sample_variance(trace.theta1.data() + start, window));

  // Mean squared displacement per lag, then an ordinary least-squares line.
  // A random walk gives msd ~ (step variance) * lag; saturation gives a
  // nearly flat tail and a slope near zero.
  double s_l = 0.0, s_m = 0.0, s_ll = 0.0, s_lm = 0.0;
  for (int lag = 1; lag <= window; ++lag) {
    double acc = 0.0;
    for (int t = 0; t + lag < n; ++t) {
      const double d = trace.theta1[t + lag] - trace.theta1[t];
      acc += d * d;
    }
    const double msd = acc / (n - lag);
    s_l += lag;
    s_m += msd;
    s_ll += static_cast<double>(lag) * lag;
    s_lm += lag * msd;
  }
  const double denom = window * s_ll - s_l * s_l;
  report.slope = denom > 0.0 ? (window * s_lm - s_l * s_m) / denom : 0.0;
  report.flagged = report.slope > 0.5;
  return report;
}

stats::KsReport embedded_delta_test(const ChainTrace& trace, double alpha) {
  return stats::ks_against_normal(trace.delta, trace.config.y, 1.0, alpha);
}

void write_csv(const ChainTrace& trace, std::ostream& os) {
  os << "t,theta1,theta2,delta\n";
  for (std::size_t t = 0; t < trace.theta1.size(); ++t)
    csv::write_row(os, static_cast<std::int64_t>(t + 1), trace.theta1[t], trace.theta2[t],
                   trace.delta[t]);
}

}  // namespace improper::gibbs
