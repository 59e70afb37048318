#pragma once

// First-order random-walk intrinsic Gaussian field on a line: the rank-
// deficient structure matrix whose quadratic form sums squared increments,
// the improper density it defines, exact sampling conditional on the sample
// mean, a quadrature-backed propriety check for the precision's posterior,
// and the two competing limits that different parameterizations of the same
// flattening sequence produce.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "improper/kernel.hpp"
#include "improper/quadrature.hpp"

namespace improper::igmrf {

class InvalidSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The first increment is zero, so the increment-rescaled limit is undefined.
class ZeroFirstIncrement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Symmetric tridiagonal structure matrix of the first-order random walk:
/// diagonal (1, 2, ..., 2, 1), off-diagonals -1.  Positive semidefinite with
/// the constant vector as its null space; x^T Q x = sum of squared
/// increments.  Requires n >= 2.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> structure_matrix(Eigen::Index n) {
  if (n < 2) throw InvalidSize("the random walk needs at least two sites");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    q(i, i) += Scalar(1);
    q(i + 1, i + 1) += Scalar(1);
    q(i, i + 1) -= Scalar(1);
    q(i + 1, i) -= Scalar(1);
  }
  return q;
}

/// Model: n sites, precision kappa, and the exponent e of the kappa-dependent
/// prefactor c(kappa) = kappa^e.  The conventional choice is e = (n-1)/2 (one
/// factor of sqrt(kappa) per increment), but the prefactor is a convention,
/// not a consequence, so it stays configurable.
struct RW1Model {
  Eigen::Index n = 2;
  double kappa = 1.0;
  double c_exponent = 0.5;

  static RW1Model of(Eigen::Index n, double kappa);
  static RW1Model of(Eigen::Index n, double kappa, double c_exponent);
};

/// Sum of squared increments: x^T Q x computed in O(n) without the matrix.
double increment_quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& x);

/// log of kappa^e * exp(-kappa/2 * x^T Q x).  Translation invariant in x.
double log_unnormalized_density(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const RW1Model& model);

/// Exact draw from the field conditional on its sample mean being mu:
/// i.i.d. Normal(0, 1/kappa) increments, cumulative sums, then a shift that
/// sets the mean.  Deterministic for a given seed, across platforms.
Eigen::VectorXd sample_given_mean(Eigen::Index n, double kappa, double mu, std::uint64_t seed);

enum class Propriety { proper, improper, sufficient_condition_met };

/// Does the posterior of the precision normalize?  With prior pi(kappa),
/// prefactor kappa^e and a fixed data quadratic form s > 0, the posterior
/// mass is the integral of pi(kappa) kappa^e exp(-kappa s / 2).  The check
/// first tries the data-free sufficient condition (the integral without the
/// exponential); if that is finite the answer holds for every s.  Otherwise
/// the full integral decides, with divergence as a regular outcome.
Propriety propriety_check(const Kernel& prior_kappa, double c_exponent, double quad_form_value,
                          const QuadratureConfig& cfg = QuadratureConfig{});

/// The two limits obtained from the same flattening sequence under two
/// parameterizations: limit_a is the unnormalized density value
/// kappa^{(n-1)/2} exp(-kappa/2 x^T Q x) (increments plus the mean);
/// limit_b = limit_a / |first increment| (increments plus mean-times-first-
/// increment).  ratio = limit_b / limit_a.
struct LimitPair {
  double limit_a = 0.0;
  double limit_b = 0.0;
  double ratio = 0.0;
};

LimitPair limit_pair_demo(const Eigen::Ref<const Eigen::VectorXd>& x, double kappa);

/// One member of the flattening sequence behind limit_a, rescaled to drop
/// its gamma-dependent normalizer: kappa^{(n-1)/2} exp(-kappa/2 x^T Q x)
/// times exp(-gamma/2 (mean(x) - mu)^2).  Tends to limit_a pointwise as
/// gamma decreases to 0.
double flattened_unnormalized(const Eigen::Ref<const Eigen::VectorXd>& x, double kappa,
                              double gamma, double mu = 0.0);

/// Long-format CSV export: header `sample_id,i,x_i`, sites indexed from 1.
void write_samples_csv(const std::vector<Eigen::VectorXd>& samples, std::ostream& os);

}  // namespace improper::igmrf
