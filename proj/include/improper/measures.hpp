#pragma once

// Core calculus of possibly-improper densities: total mass, marginals that
// may be infinite pointwise, sigma-finiteness detection, proper conditionals,
// and Bayes posteriors that exist exactly when the conditioning quantity is
// sigma-finite.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "improper/domain.hpp"
#include "improper/extended.hpp"
#include "improper/kernel.hpp"
#include "improper/quadrature.hpp"

namespace improper {

/// Conditioning (or posterior construction) was attempted on a quantity whose
/// law is not sigma-finite; no conditional distribution exists.
class NotSigmaFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The conditioning slice carries no mass, so no density can be normalized.
class ZeroSlice : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The conditioning slice has infinite mass even though the finite probe set
/// passed sigma-finiteness (probes are finite samples, so this can surface).
class DivergentSlice : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The evidence (marginal density of the data at the observed point) is zero.
class ZeroEvidence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A normalized density on a one-dimensional range.
struct ProperDensity {
  std::function<double(double)> eval;  // integrates to 1 within 1e-6
  Domain1D domain;
  double normalizer;  // the constant the raw slice was divided by
};

/// Marginal of a joint kernel on a kept axis block.
struct MarginalResult {
  std::function<ExtendedMass(const std::vector<double>&)> density;
  bool sigma_finite = false;
  ExtendedMass mass;

  ExtendedMass operator()(const std::vector<double>& point) const { return density(point); }
  ExtendedMass operator()(double point) const { return density(std::vector<double>{point}); }
};

/// Deterministic probe set used for sigma-finiteness checks: n quantile-style
/// points spread over the domain via the u = t/(1+t) map.
std::vector<double> probe_points(const Domain1D& domain, int n = 101);

/// Mass of the kernel over its full domain (may be infinite).
ExtendedMass total_mass(const Kernel& k, const QuadratureConfig& cfg = QuadratureConfig{});

/// Integrate out all axes not in keep_axes.  The result's density may return
/// infinity at points; sigma_finite reports finiteness at every probe point
/// of the kept block; mass is the total mass of the marginal.
MarginalResult marginal(const Kernel& joint, const std::vector<std::string>& keep_axes,
                        const QuadratureConfig& cfg = QuadratureConfig{});
MarginalResult marginal(const Kernel& joint, const std::string& keep_axis,
                        const QuadratureConfig& cfg = QuadratureConfig{});

/// True iff the marginal density on the axis block is finite at every probe
/// point.  Divergent probes yield false, never an error.
bool is_sigma_finite(const Kernel& joint, const std::vector<std::string>& axes,
                     const QuadratureConfig& cfg = QuadratureConfig{});
bool is_sigma_finite(const Kernel& joint, const std::string& axis,
                     const QuadratureConfig& cfg = QuadratureConfig{});

/// Slice the joint at given_axes = given_values and renormalize.  Requires
/// the conditioning block to be sigma-finite (else NotSigmaFinite) and the
/// slice mass to be positive (ZeroSlice) and finite (DivergentSlice).  The
/// slice must leave exactly one free axis.
ProperDensity condition(const Kernel& joint, const std::vector<std::string>& given_axes,
                        const std::vector<double>& given_values,
                        const QuadratureConfig& cfg = QuadratureConfig{});
ProperDensity condition(const Kernel& joint, const std::string& given_axis, double given_value,
                        const QuadratureConfig& cfg = QuadratureConfig{});

/// Posterior density of the prior's variable given one observation from the
/// likelihood family (arguments: observation, parameter).  Exists exactly
/// when the evidence integral is finite (NotSigmaFinite otherwise) and
/// positive (ZeroEvidence otherwise).
ProperDensity bayes_posterior(const Kernel& prior,
                              const std::function<double(double, double)>& likelihood,
                              double x_obs, const QuadratureConfig& cfg = QuadratureConfig{});

}  // namespace improper
