#pragma once

// The exponential-rates marginalization paradox: two observations with hazard
// rates theta*phi and phi, reduced to (x, z) = (first observation, ratio).
// Provides every named posterior route, the truncated-kernel family that
// reproduces the figure, and a detector that classifies whether the two
// routes to "the posterior given z" may legitimately be compared at all.

#include <stdexcept>
#include <vector>

#include "improper/kernel.hpp"
#include "improper/measures.hpp"
#include "improper/quadrature.hpp"

namespace improper::stone {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Prior specification: pi(theta) and the scale kernel h(phi), both on (0,inf).
struct StoneModel {
  Kernel prior_theta;
  Kernel prior_phi;
};

/// pi(theta) = e^{-theta} (the figure's choice).
Kernel exponential_prior();
/// pi(theta) = 1/theta (improper; the confidence-distribution case).
Kernel reciprocal_prior();
/// h(phi) = 1 (flat, improper).
Kernel flat_scale_kernel();
/// h(phi) = 1/phi (improper).
Kernel reciprocal_scale_kernel();
/// h_M(phi) = (1/M) 1(0 < phi <= M) (proper uniform approximation).
Kernel truncated_flat_scale_kernel(double M);

/// Joint density of (theta, phi, x, z): theta phi^2 x e^{-phi x (theta + z)} pi(theta).
/// All arguments must be positive.
double joint_init(double theta, double phi, double x, double z, const Kernel& prior_theta);

/// Posterior of theta given (x, z): proportional to theta pi(theta)/(theta+z)^3.
/// Independent of x by construction.
ProperDensity posterior_given_xz(double z, const Kernel& prior_theta,
                                 const QuadratureConfig& cfg = QuadratureConfig{});

/// The would-be posterior of theta given z alone: proportional to
/// theta pi(theta)/(theta+z)^2.
ProperDensity naive_fz(double z, const Kernel& prior_theta,
                       const QuadratureConfig& cfg = QuadratureConfig{});

/// Posterior of theta given (x, z) under a general scale kernel h:
/// proportional to (theta pi(theta)/(theta+z)^3) * integral of
/// w^2 e^{-w} h(w/(x(theta+z))) dw.  The inner integral is evaluated by
/// quadrature even when a closed form exists.
ProperDensity posterior_general_h(double x, double z, const Kernel& prior_theta,
                                  const Kernel& prior_phi,
                                  const QuadratureConfig& cfg = QuadratureConfig{});

/// 2 - e^{-A}(A^2 + 2A + 2), the mass of w^2 e^{-w} below A; evaluated by an
/// alternating series for small A where the closed form cancels
/// catastrophically.
double truncation_bracket(double A);

/// Posterior under the truncated kernel h_M in closed form: proportional to
/// (theta pi(theta)/(theta+z)^3) * [2 - e^{-A}(A^2+2A+2)], A = x M (theta+z).
ProperDensity truncated_posterior(double x, double z, double M, const Kernel& prior_theta,
                                  const QuadratureConfig& cfg = QuadratureConfig{});

enum class ParadoxVerdict { consistent, paradox, conditioning_forbidden };

struct ParadoxReport {
  ProperDensity cross_density;  // route via the posterior given (x, z)
  ProperDensity naive_density;  // route via the pretended posterior given z
  double sup_distance = 0.0;    // sup over the comparison grid
  bool z_sigma_finite = false;
  ParadoxVerdict verdict = ParadoxVerdict::consistent;
};

/// Compare the (x,z)-route against the z-route.  Verdict:
/// conditioning_forbidden whenever the marginal law of z is not sigma-finite
/// (no conditional given z exists, so the routes cannot disagree about it);
/// otherwise a paradox requires the (x,z)-route to be x-free yet differ from
/// the z-route; an x-dependent cross route is reported consistent since the
/// two routes then condition on genuinely different information.
ParadoxReport detect_paradox(double x, double z, const StoneModel& model,
                             const QuadratureConfig& cfg = QuadratureConfig{});

/// Comparison grid shared by the detector, tests and the CLI figure:
/// 2000 uniform points on (0, 10].
std::vector<double> theta_grid();

/// Sup distance between two densities over theta_grid().
double sup_distance(const ProperDensity& a, const ProperDensity& b);

}  // namespace improper::stone
