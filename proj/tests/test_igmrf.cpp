#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "improper/igmrf.hpp"
#include "improper/quadrature.hpp"

namespace ig = improper::igmrf;
using improper::Domain1D;
using improper::Kernel;

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502;

Kernel exponential_prior() {
  return Kernel::of("unit exponential prior", {"kappa", Domain1D::half_line()},
                    [](double k) { return std::exp(-k); });
}

Kernel reciprocal_prior() {
  return Kernel::of("reciprocal prior", {"kappa", Domain1D::half_line()},
                    [](double k) { return 1.0 / k; });
}

}  // namespace

TEST_CASE("structure matrix: explicit small cases and the defining identity") {
  const Eigen::MatrixXd q2 = ig::structure_matrix(2);
  CHECK(q2(0, 0) == 1.0);
  CHECK(q2(0, 1) == -1.0);
  CHECK(q2(1, 0) == -1.0);
  CHECK(q2(1, 1) == 1.0);

  const Eigen::MatrixXd q4 = ig::structure_matrix(4);
  CHECK(q4.diagonal().transpose() == Eigen::RowVector4d(1, 2, 2, 1));
  CHECK(q4 == q4.transpose());

  CHECK_THROWS_AS(ig::structure_matrix(1), ig::InvalidSize);

  // x^T Q x equals the sum of squared increments, matrix vs O(n) form.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (Eigen::Index n : {2, 5, 17}) {
    const Eigen::MatrixXd q = ig::structure_matrix(n);
    CHECK((q * Eigen::VectorXd::Ones(n)).norm() <= 1e-14);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::VectorXd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
      CHECK(std::abs(x.dot(q * x) - ig::increment_quadratic_form(x)) <= 1e-12);
    }
  }
}

TEST_CASE("structure matrix spectrum: one zero eigenvalue, the rest positive") {
  for (Eigen::Index n : {2, 5, 17}) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ig::structure_matrix(n));
    int zeros = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(es.eigenvalues()[i]) < 1e-10)
        ++zeros;
      else
        CHECK(es.eigenvalues()[i] > 0.0);
    }
    CHECK(zeros == 1);
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es4(ig::structure_matrix(4));
  CHECK(std::abs(es4.eigenvalues()[0]) <= 1e-12);
  CHECK(es4.eigenvalues()[1] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(es4.eigenvalues()[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(es4.eigenvalues()[3] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("log unnormalized density: pinned values and translation invariance") {
  CHECK(ig::RW1Model::of(4, 1.0).c_exponent == 1.5);
  CHECK(ig::RW1Model::of(50, 2.0).c_exponent == 24.5);
  CHECK_THROWS_AS(ig::RW1Model::of(1, 1.0), ig::InvalidSize);
  CHECK_THROWS_AS(ig::RW1Model::of(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ig::RW1Model::of(4, -1.0), std::invalid_argument);

  const ig::RW1Model m = ig::RW1Model::of(4, 1.0);
  Eigen::VectorXd alt(4);
  alt << 0, 1, 0, 1;
  CHECK(ig::log_unnormalized_density(alt, m) == doctest::Approx(-1.5).epsilon(1e-14));

  // A constant state has zero quadratic form: only the prefactor remains.
  const ig::RW1Model k3 = ig::RW1Model::of(5, 3.0, 2.0);
  CHECK(ig::log_unnormalized_density(Eigen::VectorXd::Constant(5, 8.25), k3) ==
        doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-14));

  CHECK_THROWS_AS(ig::log_unnormalized_density(Eigen::VectorXd::Zero(3), m),
                  ig::DimensionMismatch);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(4);
  for (Eigen::Index i = 0; i < 4; ++i) x[i] = normal(rng);
  const double base = ig::log_unnormalized_density(x, m);
  for (double c : {-11.0, 0.5, 300.0})
    CHECK(std::abs(ig::log_unnormalized_density((x.array() + c).matrix(), m) - base) <= 1e-10);
}

TEST_CASE("constrained sampling: exact mean, reproducibility, own quadratic form") {
  const Eigen::VectorXd a = ig::sample_given_mean(20, 2.0, 3.7, 11);
  CHECK(std::abs(a.mean() - 3.7) <= 1e-12);
  CHECK(a == ig::sample_given_mean(20, 2.0, 3.7, 11));
  CHECK(a != ig::sample_given_mean(20, 2.0, 3.7, 12));
  CHECK_THROWS_AS(ig::sample_given_mean(1, 1.0, 0.0, 0), ig::InvalidSize);
  CHECK_THROWS_AS(ig::sample_given_mean(4, 0.0, 0.0, 0), std::invalid_argument);

  const Eigen::MatrixXd q = ig::structure_matrix(20);
  for (std::uint64_t seed : {0, 1, 2}) {
    const Eigen::VectorXd x = ig::sample_given_mean(20, 0.5, -1.0, seed);
    CHECK(std::abs(x.dot(q * x) - ig::increment_quadratic_form(x)) <= 1e-10);
  }
}

TEST_CASE("constrained sampling: increment law and chi-square mean") {
  // 10^4 draws with n = 50.  kappa = 1: E[x^T Q x] = n - 1 = 49 (within 3%).
  const int reps = 10000;
  double sum_q = 0.0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd x = ig::sample_given_mean(50, 1.0, 0.0, 100000 + r);
    sum_q += ig::increment_quadratic_form(x);
  }
  const double mean_q = sum_q / reps;
  CHECK(std::abs(mean_q - 49.0) / 49.0 <= 0.03);

  // kappa = 4: increment variance 1/kappa = 0.25 (within 2%).
  double acc = 0.0, acc2 = 0.0;
  long cnt = 0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd x = ig::sample_given_mean(50, 4.0, 0.0, 50100000 + r);
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double d = x[i + 1] - x[i];
      acc += d;
      acc2 += d * d;
      ++cnt;
    }
  }
  const double var = (acc2 - acc * acc / cnt) / (cnt - 1);
  CHECK(std::abs(var - 0.25) / 0.25 <= 0.02);
}

TEST_CASE("propriety check: sufficient condition, full integral, divergence") {
  const Kernel expo = exponential_prior();
  const Kernel recip = reciprocal_prior();

  CHECK(ig::propriety_check(expo, 1.5, 1.0) == ig::Propriety::sufficient_condition_met);
  CHECK(ig::propriety_check(recip, 1.5, 1.0) == ig::Propriety::proper);
  CHECK(ig::propriety_check(recip, 0.0, 1.0) == ig::Propriety::improper);

  // For the reciprocal prior at e = 3/2 the posterior mass is the integral
  // of k^{1/2} e^{-k/2}: sqrt(2 pi).
  const improper::ExtendedMass mass = improper::integrate(
      [](double k) { return std::pow(k, 0.5) * std::exp(-0.5 * k); }, Domain1D::half_line());
  REQUIRE(mass.is_finite());
  CHECK(mass.value() == doctest::Approx(kSqrt2Pi).epsilon(1e-8));

  CHECK_THROWS_AS(ig::propriety_check(expo, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ig::propriety_check(expo, 1.5, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(
      ig::propriety_check(Kernel::of("plane", {"a", Domain1D::half_line()},
                                     {"b", Domain1D::half_line()},
                                     [](double, double) { return 1.0; }),
                          1.5, 1.0),
      std::invalid_argument);
}

TEST_CASE("propriety monotonicity on the example priors") {
  const Kernel expo = exponential_prior();
  for (double e : {1.5, 1.0, 0.5, 0.0})
    CHECK(ig::propriety_check(expo, e, 1.0) == ig::Propriety::sufficient_condition_met);

  // The reciprocal prior stays proper while the exponent keeps the origin
  // integrable; e = 0 crosses into log-divergence (pinned above).
  const Kernel recip = reciprocal_prior();
  for (double e : {1.5, 1.0, 0.5})
    CHECK(ig::propriety_check(recip, e, 1.0) == ig::Propriety::proper);
}

TEST_CASE("the two parameterizations of the same flattening disagree") {
  Eigen::VectorXd unit(4), twice(4);
  unit << 0, 1, 1, 1;
  twice << 0, 2, 2, 2;

  const ig::LimitPair p1 = ig::limit_pair_demo(unit, 1.0);
  CHECK(p1.limit_a == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(p1.ratio == 1.0);
  CHECK(p1.limit_b == p1.limit_a);

  const ig::LimitPair p2 = ig::limit_pair_demo(twice, 1.0);
  CHECK(p2.limit_a == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(p2.ratio == 0.5);
  CHECK(p2.limit_b == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));

  Eigen::VectorXd flat_start(4);
  flat_start << 1, 1, 2, 3;
  CHECK_THROWS_AS(ig::limit_pair_demo(flat_start, 1.0), ig::ZeroFirstIncrement);
}

TEST_CASE("finite flattening converges pointwise to the mean-parameterized limit") {
  Eigen::VectorXd x(4);
  x << 0, 1, 0, 1;  // mean 1/2, so the flattening factor is active
  const double limit_a = ig::limit_pair_demo(x, 1.0).limit_a;
  CHECK(limit_a == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));

  double prev = std::numeric_limits<double>::infinity();
  for (double gamma : {1.0, 0.1, 0.01}) {
    const double err = std::abs(ig::flattened_unnormalized(x, 1.0, gamma) - limit_a);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 3e-4);
  CHECK_THROWS_AS(ig::flattened_unnormalized(x, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("each flattening member is itself proper (n = 2 mass by quadrature)") {
  // For two sites the rescaled member integrates to 2 pi / sqrt(gamma):
  // the precision matrix kappa*Q + gamma/4 * ones has determinant kappa*gamma.
  const double kappa = 2.0, gamma = 0.5;
  const improper::ExtendedMass mass = improper::integrate2d(
      [kappa, gamma](double a, double b) {
        Eigen::Vector2d x(a, b);
        return ig::flattened_unnormalized(x, kappa, gamma);
      },
      Domain1D::real_line(), Domain1D::real_line());
  REQUIRE(mass.is_finite());
  const double ref = 2.0 * 4.0 * std::atan(1.0) / std::sqrt(gamma);
  CHECK(mass.value() == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("long-format CSV export") {
  std::vector<Eigen::VectorXd> samples;
  samples.push_back((Eigen::VectorXd(3) << 0.5, -1.0, 2.0).finished());
  samples.push_back((Eigen::VectorXd(3) << 1.0, 0.0, -0.25).finished());
  std::ostringstream out;
  ig::write_samples_csv(samples, out);

  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "sample_id,i,x_i");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string sid, idx, val;
    REQUIRE(std::getline(row, sid, ','));
    REQUIRE(std::getline(row, idx, ','));
    REQUIRE(std::getline(row, val, ','));
    const int s = std::stoi(sid) - 1;
    const int i = std::stoi(idx) - 1;
    CHECK(std::stod(val) == samples.at(s)[i]);
    ++rows;
  }
  CHECK(rows == 6);
}
