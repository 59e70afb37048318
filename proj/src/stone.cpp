#include "improper/stone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace improper::stone {

namespace {

double sq(double v) { return v * v; }

Axis theta_axis() { return {"theta", Domain1D::half_line()}; }
Axis phi_axis() { return {"phi", Domain1D::half_line()}; }

// Normalize a nonnegative shape on (0,inf) into a ProperDensity.
ProperDensity normalize_shape(std::function<double(double)> shape, const std::string& what,
                              const QuadratureConfig& cfg) {
  const Domain1D dom = Domain1D::half_line();
  const ExtendedMass mass = integrate(shape, dom, cfg);
  if (mass.is_infinite()) throw DivergentSlice(what + " has infinite mass");
  if (mass.value() <= 0.0) throw ZeroSlice(what + " carries no mass");
  const double z = mass.value();
  return ProperDensity{[shape = std::move(shape), z](double t) { return shape(t) / z; }, dom, z};
}

}  // namespace

Kernel exponential_prior() {
  return Kernel::of("exp(-theta) prior", theta_axis(), [](double t) { return std::exp(-t); });
}

Kernel reciprocal_prior() {
  return Kernel::of("1/theta prior", theta_axis(), [](double t) { return 1.0 / t; });
}

Kernel flat_scale_kernel() {
  return Kernel::of("flat scale kernel", phi_axis(), [](double) { return 1.0; });
}

Kernel reciprocal_scale_kernel() {
  return Kernel::of("1/phi scale kernel", phi_axis(), [](double p) { return 1.0 / p; });
}

Kernel truncated_flat_scale_kernel(double M) {
  if (!(M > 0.0)) throw DomainError("truncation level must be positive");
  return Kernel::of("uniform scale kernel on (0, M]", {"phi", Domain1D::half_line(), {M}},
                    [M](double p) { return p > 0.0 && p <= M ? 1.0 / M : 0.0; });
}

double joint_init(double theta, double phi, double x, double z, const Kernel& prior_theta) {
  if (!(theta > 0.0) || !(phi > 0.0) || !(x > 0.0) || !(z > 0.0))
    throw DomainError("joint density requires positive theta, phi, x, z");
  return theta * phi * phi * x * std::exp(-phi * x * (theta + z)) *
         prior_theta(std::vector<double>{theta});
}

ProperDensity posterior_given_xz(double z, const Kernel& prior_theta,
                                 const QuadratureConfig& cfg) {
  if (!(z > 0.0)) throw DomainError("z must be positive");
  auto shape = [z, prior_theta](double t) {
    return t * prior_theta(std::vector<double>{t}) / std::pow(t + z, 3.0);
  };
  return normalize_shape(shape, "posterior given (x,z)", cfg);
}

ProperDensity naive_fz(double z, const Kernel& prior_theta, const QuadratureConfig& cfg) {
  if (!(z > 0.0)) throw DomainError("z must be positive");
  auto shape = [z, prior_theta](double t) {
    return t * prior_theta(std::vector<double>{t}) / std::pow(t + z, 2.0);
  };
  return normalize_shape(shape, "pretended posterior given z", cfg);
}

ProperDensity posterior_general_h(double x, double z, const Kernel& prior_theta,
                                  const Kernel& prior_phi, const QuadratureConfig& cfg) {
  if (!(x > 0.0) || !(z > 0.0)) throw DomainError("x and z must be positive");
  auto shape = [x, z, prior_theta, prior_phi, cfg](double t) -> double {
    const double scale = x * (t + z);
    // The integration variable is w = phi * scale, so the kernel's declared
    // jump points move with it.
    std::vector<double> w_breaks;
    for (double s : prior_phi.axes()[0].breaks) w_breaks.push_back(s * scale);
    const ExtendedMass inner = integrate(
        [&](double w) {
          return w * w * std::exp(-w) * prior_phi(std::vector<double>{w / scale});
        },
        Domain1D::half_line(), w_breaks, cfg);
    return t * prior_theta(std::vector<double>{t}) / std::pow(t + z, 3.0) * inner.value();
  };
  return normalize_shape(shape, "posterior under general scale kernel", cfg);
}

double truncation_bracket(double A) {
  if (!(A >= 0.0)) throw DomainError("bracket argument must be nonnegative");
  if (A < 0.5) {
    // Alternating series of the lower incomplete integral of w^2 e^{-w}:
    // sum_k (-1)^k A^{k+3} / (k! (k+3)).  The closed form cancels to noise
    // here (and can round below zero, which would poison quadrature).
    double p = A * A * A;  // (-1)^k A^{k+3} / k! at k = 0
    double sum = p / 3.0;
    for (int k = 1; k < 60; ++k) {
      p *= -A / k;
      const double contrib = p / (k + 3.0);
      sum += contrib;
      if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return 2.0 - std::exp(-A) * (A * A + 2.0 * A + 2.0);
}

ProperDensity truncated_posterior(double x, double z, double M, const Kernel& prior_theta,
                                  const QuadratureConfig& cfg) {
  if (!(x > 0.0) || !(z > 0.0) || !(M > 0.0))
    throw DomainError("x, z and M must be positive");
  auto shape = [x, z, M, prior_theta](double t) {
    const double A = x * M * (t + z);
    return t * prior_theta(std::vector<double>{t}) / std::pow(t + z, 3.0) *
           truncation_bracket(A);
  };
  return normalize_shape(shape, "truncated-kernel posterior", cfg);
}

std::vector<double> theta_grid() {
  std::vector<double> g;
  g.reserve(2000);
  for (int i = 1; i <= 2000; ++i) g.push_back(10.0 * i / 2000.0);
  return g;
}

double sup_distance(const ProperDensity& a, const ProperDensity& b) {
  double sup = 0.0;
  for (double t : theta_grid()) sup = std::max(sup, std::abs(a.eval(t) - b.eval(t)));
  return sup;
}

ParadoxReport detect_paradox(double x, double z, const StoneModel& model,
                             const QuadratureConfig& cfg) {
  if (!(x > 0.0) || !(z > 0.0)) throw DomainError("x and z must be positive");

  // Marginal law of (z, theta) once the scale variable is integrated out:
  // theta pi(theta)/(theta+z)^2 times the total mass of h.  Infinite h-mass
  // makes the joint infinite wherever the finite factor is positive.
  const ExtendedMass h_mass = total_mass(model.prior_phi, cfg);
  const Kernel prior = model.prior_theta;
  Kernel zt = [&]() {
    if (h_mass.is_infinite()) {
      return Kernel::of("(z,theta) law, infinite scale mass", {"z", Domain1D::half_line()},
                        theta_axis(), [prior](double zz, double t) {
                          const double finite_part =
                              t * prior(std::vector<double>{t}) / sq(t + zz);
                          return finite_part > 0.0
                                     ? std::numeric_limits<double>::infinity()
                                     : 0.0;
                        });
    }
    const double hm = h_mass.value();
    return Kernel::of("(z,theta) law", {"z", Domain1D::half_line()}, theta_axis(),
                      [prior, hm](double zz, double t) {
                        return hm * t * prior(std::vector<double>{t}) / sq(t + zz);
                      });
  }();

  const bool z_sigma_finite = is_sigma_finite(zt, "z", cfg);
  ProperDensity cross = posterior_general_h(x, z, model.prior_theta, model.prior_phi, cfg);
  ProperDensity naive = naive_fz(z, model.prior_theta, cfg);
  const double sup = sup_distance(cross, naive);

  ParadoxVerdict verdict = ParadoxVerdict::conditioning_forbidden;
  if (z_sigma_finite) {
    // A marginalization paradox needs the (x,z)-route to be x-free yet
    // disagree with the z-route.  If it depends on x, the routes condition on
    // genuinely different information and no contradiction can be claimed.
    const ProperDensity cross_far =
        posterior_general_h(x / 1000.0, z, model.prior_theta, model.prior_phi, cfg);
    const bool x_free = sup_distance(cross, cross_far) <= 1e-6;
    verdict = (x_free && sup > 1e-6) ? ParadoxVerdict::paradox : ParadoxVerdict::consistent;
  }
  return ParadoxReport{std::move(cross), std::move(naive), sup, z_sigma_finite, verdict};
}

}  // namespace improper::stone
