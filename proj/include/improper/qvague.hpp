#pragma once

// Convergence of possibly-improper distributions up to positive scaling
// ("q-vague" convergence): a sequence of mixed measures converges to a limit
// when suitably rescaled copies integrate every continuous compact-support
// test function to the limit's value.  Verified numerically on a finite
// battery of triangular bumps, which separates the limit candidates that
// matter here (point masses, Lebesgue measure, and their mixtures).  Includes
// the flat-prior limit of normal priors, the truncated-scale-kernel family,
// and the point-null testing example where improper and proper routes give
// irreconcilable answers.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "improper/extended.hpp"
#include "improper/kernel.hpp"
#include "improper/quadrature.hpp"

namespace improper::qvague {

/// The reference test function cannot anchor the scale sequence: its integral
/// against the candidate or some sequence member is zero or infinite.
class ReferenceDegenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point mass: weight at a single location.
struct PointMass {
  double location = 0.0;
  double weight = 1.0;
};

/// A measure with an atomic part and an absolutely continuous part (either
/// may be empty).  Atom weights are positive, locations distinct; the
/// a.c. part is a one-axis kernel and may have infinite total mass.
class MixedMeasure {
 public:
  static MixedMeasure point_mass(double location, double weight = 1.0);
  static MixedMeasure density(Kernel ac_part);
  /// Lebesgue measure on the domain: the constant-1 density.
  static MixedMeasure lebesgue(Domain1D domain);
  static MixedMeasure mixture(std::vector<PointMass> atoms, std::optional<Kernel> ac_part);

  const std::vector<PointMass>& atoms() const { return atoms_; }
  const std::optional<Kernel>& ac_part() const { return ac_; }
  const std::string& label() const { return label_; }

  /// The same measure with every part multiplied by a nonnegative pointwise
  /// factor (a likelihood, say).  Atoms whose weight becomes zero drop out;
  /// negative factor values surface as NegativeDensity when integrated or,
  /// at an atom, as std::invalid_argument immediately.
  MixedMeasure reweighted(const std::function<double(double)>& factor,
                          const std::string& label) const;

 private:
  MixedMeasure(std::string label, std::vector<PointMass> atoms, std::optional<Kernel> ac);

  std::string label_;
  std::vector<PointMass> atoms_;
  std::optional<Kernel> ac_;
};

/// A continuous test function with compact support [lo, hi].  `kinks` lists
/// the points where it is not smooth; integration splits there, keeping
/// integrals of piecewise-linear bumps exact.
struct TestFunction {
  std::function<double(double)> eval;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> kinks{};

  /// Triangular bump: peak 1 at the center, linear to 0 at center +- width.
  static TestFunction bump(double center, double half_width);
  /// alpha*f + beta*g for alpha, beta >= 0; support is the union hull.
  static TestFunction combine(double alpha, const TestFunction& f, double beta,
                              const TestFunction& g);
};

/// A finite battery of triangular bumps sharing one half-width.
class TestFunctionFamily {
 public:
  TestFunctionFamily(std::vector<double> centers, double half_width);

  /// Default battery for a domain: `count` evenly spaced centers covering
  /// [-10, 10] on the real line, (0, 20] on a half line, or the interior of a
  /// bounded range, plus every location in `must_include` (atom locations of
  /// the measures under test belong there).
  static TestFunctionFamily for_domain(const Domain1D& domain,
                                       const std::vector<double>& must_include = {},
                                       int count = 25, double half_width = 0.5);

  std::size_t size() const { return centers_.size(); }
  TestFunction member(std::size_t i) const;
  const std::vector<double>& centers() const { return centers_; }
  double half_width() const { return half_width_; }

 private:
  std::vector<double> centers_;
  double half_width_;
};

/// Outcome of a convergence check along a finite index list.
struct QVagueVerdict {
  bool converges = false;
  std::vector<double> scale_sequence;  // a_n anchoring each sequence member
  std::vector<double> errors;          // max over the family, one per index
  double worst_error = 0.0;            // errors at the final index
  std::string limit_label;
};

/// Integral of the test function against the measure: the atom sum plus the
/// integral of the a.c. density times the bump over their common support.
ExtendedMass pair_integral(const MixedMeasure& m, const TestFunction& phi,
                           const QuadratureConfig& cfg = QuadratureConfig{});

/// Check that seq(n) -> candidate up to positive scaling along `indices`.
/// The scale a_n is anchored on a reference family member phi0 (the first one
/// with a positive finite candidate integral unless `reference` names one);
/// convergence means the family-wide errors never increase by more than `tol`
/// from one index to the next and end below `tol`.
QVagueVerdict check_qvague(const std::function<MixedMeasure(double)>& seq,
                           const std::vector<double>& indices, const MixedMeasure& candidate,
                           const TestFunctionFamily& family, double tol = 1e-3,
                           std::optional<std::size_t> reference = std::nullopt,
                           const QuadratureConfig& cfg = QuadratureConfig{});

/// Posterior probability of the point null theta = 0 for one Normal(theta, 1)
/// observation x under the improper prior (1/2) delta_0 + (1/2) Lebesgue:
/// 1 / (1 + sqrt(2 pi) e^{x^2/2}).  Bounded above by ~0.285 whatever x is.
double lindley_posterior_improper(double x);

/// The proper counterpart with (1/2) delta_0 + (1/2) Normal(0, n^2):
/// 1 / (1 + sqrt(1/(1+n^2)) e^{n^2 x^2 / (2(1+n^2))}).  Tends to 1 as n grows
/// with x fixed and nonzero, not to the improper value.
double lindley_posterior_proper(double x, double n);

/// Reweight every member of a convergent prior sequence and its candidate
/// limit by the likelihood of the observed data, then run the same
/// convergence check on the resulting posterior kernels.  `likelihood` is a
/// two-axis kernel (observation first, parameter second) sliced at x_obs.
QVagueVerdict posterior_convergence_check(const std::function<MixedMeasure(double)>& prior_seq,
                                          const std::vector<double>& indices,
                                          const Kernel& likelihood, double x_obs,
                                          const MixedMeasure& candidate_prior,
                                          const TestFunctionFamily& family, double tol = 1e-3,
                                          const QuadratureConfig& cfg = QuadratureConfig{});

}  // namespace improper::qvague
