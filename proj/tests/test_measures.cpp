#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "improper/measures.hpp"
#include "oracles.hpp"

using improper::Axis;
using improper::Domain1D;
using improper::Kernel;
using improper::condition;
using improper::is_sigma_finite;
using improper::marginal;
using improper::total_mass;

namespace {

Kernel unit_exponential() {
  return Kernel::of("unit exponential", {"theta", Domain1D::half_line()},
                    [](double t) { return std::exp(-t); });
}

// Flat-by-proper product: theta1 ~ standard normal, theta2 ~ Lebesgue.
Kernel normal_times_flat() {
  return Kernel::of(
      "normal x flat", {"theta1", Domain1D::real_line()}, {"theta2", Domain1D::real_line()},
      [](double t1, double) { return oracles::normal_pdf(t1); });
}

// Location model with two flat location parameters and one observation axis.
Kernel two_location_joint() {
  return Kernel::of("two-location joint", {"y", Domain1D::real_line()},
                    {"theta1", Domain1D::real_line()}, {"theta2", Domain1D::real_line()},
                    [](double y, double t1, double t2) { return oracles::normal_pdf(y - t1 - t2); });
}

// Joint of (x, z, theta) for the rate-pair model with flat scale kernel and
// exponential prior: 2 theta exp(-theta) / (x^2 (theta+z)^3).
Kernel xz_theta_joint() {
  return Kernel::of("xz-theta joint", {"x", Domain1D::half_line()},
                    {"z", Domain1D::half_line()}, {"theta", Domain1D::half_line()},
                    [](double x, double z, double theta) {
                      return 2.0 * theta * std::exp(-theta) /
                             (x * x * std::pow(theta + z, 3.0));
                    });
}

}  // namespace

TEST_CASE("total mass of canonical kernels") {
  CHECK(total_mass(unit_exponential()).value() == doctest::Approx(1.0).epsilon(1e-8));

  const Kernel inv_scale = Kernel::of("reciprocal scale", {"phi", Domain1D::half_line()},
                                      [](double p) { return 1.0 / p; });
  CHECK(total_mass(inv_scale).is_infinite());

  const double M = 500.0;
  const Kernel uniform_slab =
      Kernel::of("uniform slab", {"phi", Domain1D::half_line()},
                 [M](double p) { return p > 0.0 && p <= M ? 1.0 / M : 0.0; });
  const auto m = total_mass(uniform_slab);
  REQUIRE(m.is_finite());
  CHECK(m.value() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("marginal of a proper-by-flat product: flat side") {
  const auto r = marginal(normal_times_flat(), "theta2");
  CHECK(r.sigma_finite);
  CHECK(r.mass.is_infinite());
  for (double t : {-7.0, -1.3, 0.0, 2.0, 55.0}) {
    const auto d = r(t);
    REQUIRE(d.is_finite());
    CHECK(d.value() == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("marginal of a proper-by-flat product: proper side is not recoverable") {
  const auto r = marginal(normal_times_flat(), "theta1");
  CHECK_FALSE(r.sigma_finite);
  CHECK(r.mass.is_infinite());
  CHECK(r(0.0).is_infinite());
  CHECK(r(1.7).is_infinite());
}

TEST_CASE("two-location joint: observation axis is not sigma-finite") {
  const auto r = marginal(two_location_joint(), "y");
  CHECK_FALSE(r.sigma_finite);
  CHECK(r(0.7).is_infinite());
  CHECK(r.mass.is_infinite());
}

TEST_CASE("sigma-finiteness verdicts") {
  CHECK(is_sigma_finite(xz_theta_joint(), std::vector<std::string>{"x", "z"}));

  // Pointwise-infinite joint of (z, theta): the scale variable was integrated
  // out against a kernel of infinite mass.
  const double inf = std::numeric_limits<double>::infinity();
  const Kernel zt = Kernel::of("zt joint, infinite scale mass", {"z", Domain1D::half_line()},
                               {"theta", Domain1D::half_line()}, [inf](double z, double theta) {
                                 const double finite_part =
                                     theta * std::exp(-theta) / oracles::sq(theta + z);
                                 return finite_part > 0.0 ? inf : 0.0;
                               });
  CHECK_FALSE(is_sigma_finite(zt, "z"));
  CHECK_FALSE(is_sigma_finite(zt, "theta"));

  const Kernel proper2 =
      Kernel::of("bivariate normal product", {"a", Domain1D::real_line()},
                 {"b", Domain1D::real_line()}, [](double a, double b) {
                   return oracles::normal_pdf(a) * oracles::normal_pdf(b, 1.0, 2.0);
                 });
  CHECK(is_sigma_finite(proper2, "a"));
  CHECK(is_sigma_finite(proper2, "b"));
}

TEST_CASE("condition on the pair (x, z) reproduces the cross-section density") {
  const auto post = condition(xz_theta_joint(), {"x", "z"}, {1.0, 1.0});

  // Reference: theta e^{-theta} / (1+theta)^3 normalized by a Riemann sum.
  auto shape = [](double t) { return t * std::exp(-t) / std::pow(1.0 + t, 3.0); };
  const double z0 = oracles::riemann(shape, 0.0, 60.0, 1e-5);
  for (double t : {0.05, 0.3, 1.0, 2.7, 8.0}) {
    CHECK(post.eval(t) == doctest::Approx(shape(t) / z0).epsilon(1e-6));
  }
  const auto unit = improper::integrate(post.eval, post.domain);
  CHECK(unit.value() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("conditioning an independent product recovers the other factor") {
  const Kernel prod = Kernel::of(
      "normal x exponential", {"a", Domain1D::real_line()}, {"b", Domain1D::half_line()},
      [](double a, double b) { return oracles::normal_pdf(a) * std::exp(-b); });
  const auto got = condition(prod, "b", 0.3);
  for (double a : {-3.0, -0.4, 0.0, 1.2, 4.0}) {
    CHECK(got.eval(a) == doctest::Approx(oracles::normal_pdf(a)).epsilon(1e-6));
  }
}

TEST_CASE("conditioning on a non-sigma-finite axis is refused") {
  CHECK_THROWS_AS(condition(two_location_joint(), "y", 1.0), improper::NotSigmaFinite);
}

TEST_CASE("zero and divergent slices are reported") {
  const Kernel windowed =
      Kernel::of("windowed product", {"x", Domain1D::half_line()},
                 {"theta", Domain1D::real_line()}, [](double x, double theta) {
                   return (x < 1.0 ? 1.0 : 0.0) * oracles::normal_pdf(theta);
                 });
  CHECK_THROWS_AS(condition(windowed, "x", 2.0), improper::ZeroSlice);

  const Kernel spiked =
      Kernel::of("integrable spike at 2.1", {"x", Domain1D::half_line()},
                 {"theta", Domain1D::real_line()}, [](double x, double theta) {
                   return oracles::normal_pdf(theta) / std::pow(std::abs(x - 2.1), 1.2);
                 });
  CHECK_THROWS_AS(condition(spiked, "x", 2.1), improper::DivergentSlice);
}

TEST_CASE("scale invariance of conditioning") {
  const Kernel base = xz_theta_joint();
  const auto a = condition(base, {"x", "z"}, {0.5, 2.0});
  const auto b = condition(base.scaled(7.3), {"x", "z"}, {0.5, 2.0});
  for (double t : {0.1, 0.7, 1.9, 5.0}) {
    CHECK(a.eval(t) == doctest::Approx(b.eval(t)).epsilon(1e-6));
  }
}

TEST_CASE("factorized prior asymmetry") {
  const Kernel joint = normal_times_flat();

  // Flat side marginal recovers the flat density exactly.
  const auto flat_side = marginal(joint, "theta2");
  CHECK(flat_side.sigma_finite);
  for (double t : {-20.0, -2.0, 0.5, 11.0}) {
    CHECK(flat_side(t).value() == doctest::Approx(1.0).epsilon(1e-7));
  }

  // Proper side marginal is infinite wherever the proper factor is positive.
  const auto proper_side = marginal(joint, "theta1");
  CHECK_FALSE(proper_side.sigma_finite);
  CHECK(proper_side(0.0).is_infinite());
  CHECK(proper_side(-2.5).is_infinite());

  // Conditioning on the flat coordinate recovers the proper factor.
  const auto recovered = condition(joint, "theta2", -3.2);
  for (double t : {-2.0, 0.0, 0.9, 3.1}) {
    CHECK(recovered.eval(t) == doctest::Approx(oracles::normal_pdf(t)).epsilon(1e-6));
  }
}

TEST_CASE("posterior from a proper prior and rate likelihood") {
  const Kernel prior = unit_exponential();
  auto rate_lik = [](double x, double theta) {
    return x > 0.0 ? theta * std::exp(-theta * x) : 0.0;
  };
  const auto post = improper::bayes_posterior(prior, rate_lik, 1.0);

  // Conjugate oracle: posterior is Gamma(shape 2, rate 2), mean 1.
  const double rate = 2.0;
  for (double t : {0.2, 1.0, 2.5}) {
    CHECK(post.eval(t) == doctest::Approx(rate * rate * t * std::exp(-rate * t)).epsilon(1e-7));
  }
  const auto mean =
      improper::integrate([&](double t) { return t * post.eval(t); }, post.domain);
  CHECK(mean.value() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("posterior from a flat prior on the rate") {
  const Kernel flat_prior =
      Kernel::of("flat rate prior", {"theta", Domain1D::half_line()}, [](double) { return 1.0; });
  auto rate_lik = [](double x, double theta) {
    return x > 0.0 ? theta * std::exp(-theta * x) : 0.0;
  };
  const auto post = improper::bayes_posterior(flat_prior, rate_lik, 2.0);
  const double rate = 2.0;
  for (double t : {0.2, 1.0, 2.5}) {
    CHECK(post.eval(t) == doctest::Approx(rate * rate * t * std::exp(-rate * t)).epsilon(1e-7));
  }
  const auto mean =
      improper::integrate([&](double t) { return t * post.eval(t); }, post.domain);
  CHECK(mean.value() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("posterior refusals: infinite and zero evidence") {
  const Kernel flat_real = Kernel::of("flat location prior", {"theta", Domain1D::real_line()},
                                      [](double) { return 1.0; });
  auto constant_lik = [](double, double) { return 0.5; };
  CHECK_THROWS_AS(improper::bayes_posterior(flat_real, constant_lik, 0.7),
                  improper::NotSigmaFinite);

  const Kernel prior = unit_exponential();
  auto supported_lik = [](double x, double theta) {
    return (x > 0.0 && x < theta) ? 1.0 / theta : 0.0;
  };
  CHECK_THROWS_AS(improper::bayes_posterior(prior, supported_lik, -5.0),
                  improper::ZeroEvidence);
}

TEST_CASE("posterior existence matches sigma-finiteness of the evidence axis") {
  // Success case: joint of (x, theta) under the rate model with unit
  // exponential prior is sigma-finite in x, and the posterior exists.
  const Kernel joint_ok =
      Kernel::of("rate model joint", {"x", Domain1D::half_line()},
                 {"theta", Domain1D::half_line()}, [](double x, double theta) {
                   return theta * std::exp(-theta * x) * std::exp(-theta);
                 });
  CHECK(is_sigma_finite(joint_ok, "x"));
  CHECK_NOTHROW(improper::bayes_posterior(
      unit_exponential(),
      [](double x, double theta) { return x > 0.0 ? theta * std::exp(-theta * x) : 0.0; }, 1.5));

  // Failure case: flat prior with a theta-free likelihood; the evidence axis
  // is not sigma-finite and the posterior construction is refused.
  const Kernel joint_bad = Kernel::of("flat location, flat evidence", {"x", Domain1D::real_line()},
                                      {"theta", Domain1D::real_line()},
                                      [](double x, double) { return oracles::normal_pdf(x); });
  CHECK_FALSE(is_sigma_finite(joint_bad, "x"));
  const Kernel flat_real = Kernel::of("flat location prior", {"theta", Domain1D::real_line()},
                                      [](double) { return 1.0; });
  CHECK_THROWS_AS(improper::bayes_posterior(
                      flat_real, [](double x, double) { return oracles::normal_pdf(x); }, 0.0),
                  improper::NotSigmaFinite);
}

TEST_CASE("finite marginal mass implies sigma-finiteness") {
  const Kernel proper2 =
      Kernel::of("bivariate normal product", {"a", Domain1D::real_line()},
                 {"b", Domain1D::real_line()}, [](double a, double b) {
                   return oracles::normal_pdf(a) * oracles::normal_pdf(b, 1.0, 2.0);
                 });
  const auto r = marginal(proper2, "a");
  REQUIRE(r.mass.is_finite());
  CHECK(r.mass.value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.sigma_finite);
}
