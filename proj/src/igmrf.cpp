#include "improper/igmrf.hpp"

#include <cmath>

#include "improper/csv.hpp"
#include "improper/stats.hpp"

namespace improper::igmrf {

RW1Model RW1Model::of(Eigen::Index n, double kappa) {
  return of(n, kappa, 0.5 * static_cast<double>(n - 1));
}

RW1Model RW1Model::of(Eigen::Index n, double kappa, double c_exponent) {
  if (n < 2) throw InvalidSize("the random walk needs at least two sites");
  if (!std::isfinite(kappa) || !(kappa > 0.0))
    throw std::invalid_argument("precision kappa must be positive and finite");
  if (!std::isfinite(c_exponent))
    throw std::invalid_argument("the prefactor exponent must be finite");
  return RW1Model{n, kappa, c_exponent};
}

double increment_quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) throw InvalidSize("the quadratic form needs at least two sites");
  const Eigen::Index m = x.size() - 1;
  return (x.tail(m) - x.head(m)).squaredNorm();
}

double log_unnormalized_density(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const RW1Model& model) {
  if (x.size() != model.n)
    throw DimensionMismatch("the state vector length does not match the model size");
  return model.c_exponent * std::log(model.kappa) -
         0.5 * model.kappa * increment_quadratic_form(x);
}

Eigen::VectorXd sample_given_mean(Eigen::Index n, double kappa, double mu,
                                  std::uint64_t seed) {
  if (n < 2) throw InvalidSize("the random walk needs at least two sites");
  if (!std::isfinite(kappa) || !(kappa > 0.0))
    throw std::invalid_argument("precision kappa must be positive and finite");
  if (!std::isfinite(mu)) throw std::invalid_argument("the target mean must be finite");
  stats::NormalStream noise(seed);
  const double sd = 1.0 / std::sqrt(kappa);
  Eigen::VectorXd x(n);
  x[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) x[i] = x[i - 1] + noise(0.0, sd);
  x.array() += mu - x.mean();
  return x;
}

Propriety propriety_check(const Kernel& prior_kappa, double c_exponent, double quad_form_value,
                          const QuadratureConfig& cfg) {
  if (prior_kappa.arity() != 1)
    throw std::invalid_argument("the precision prior must have exactly one axis");
  if (!std::isfinite(quad_form_value) || !(quad_form_value > 0.0))
    throw std::invalid_argument(
        "the data quadratic form must be positive: a constant state carries no information");
  const Axis& ax = prior_kappa.axes()[0];

  const ExtendedMass data_free = integrate(
      [&prior_kappa, c_exponent](double k) {
        return prior_kappa(std::vector<double>{k}) * std::pow(k, c_exponent);
      },
      ax.domain, ax.breaks, cfg);
  if (data_free.is_finite()) return Propriety::sufficient_condition_met;

  const double s = quad_form_value;
  const ExtendedMass full = integrate(
      [&prior_kappa, c_exponent, s](double k) {
        return prior_kappa(std::vector<double>{k}) * std::pow(k, c_exponent) *
               std::exp(-0.5 * k * s);
      },
      ax.domain, ax.breaks, cfg);
  return full.is_finite() ? Propriety::proper : Propriety::improper;
}

LimitPair limit_pair_demo(const Eigen::Ref<const Eigen::VectorXd>& x, double kappa) {
  const RW1Model model = RW1Model::of(x.size(), kappa);
  const double first = x[1] - x[0];
  if (first == 0.0)
    throw ZeroFirstIncrement(
        "the first increment is zero, so the rescaled parameterization has no limit");
  LimitPair pair;
  pair.limit_a = std::exp(log_unnormalized_density(x, model));
  pair.ratio = 1.0 / std::abs(first);
  pair.limit_b = pair.limit_a * pair.ratio;
  return pair;
}

double flattened_unnormalized(const Eigen::Ref<const Eigen::VectorXd>& x, double kappa,
                              double gamma, double mu) {
  if (!std::isfinite(gamma) || !(gamma > 0.0))
    throw std::invalid_argument("the flattening precision gamma must be positive and finite");
  const RW1Model model = RW1Model::of(x.size(), kappa);
  const double centered = x.mean() - mu;
  return std::exp(log_unnormalized_density(x, model) - 0.5 * gamma * centered * centered);
}

void write_samples_csv(const std::vector<Eigen::VectorXd>& samples, std::ostream& os) {
  os << "sample_id,i,x_i\n";
  for (std::size_t s = 0; s < samples.size(); ++s)
    for (Eigen::Index i = 0; i < samples[s].size(); ++i)
      csv::write_row(os, static_cast<std::int64_t>(s + 1), static_cast<std::int64_t>(i + 1),
                     samples[s][i]);
}

}  // namespace improper::igmrf
