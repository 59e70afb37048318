#include "improper/qvague.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace improper::qvague {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502;

std::string describe(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

MixedMeasure::MixedMeasure(std::string label, std::vector<PointMass> atoms,
                           std::optional<Kernel> ac)
    : label_(std::move(label)), atoms_(std::move(atoms)), ac_(std::move(ac)) {
  for (const PointMass& a : atoms_) {
    if (!std::isfinite(a.location))
      throw std::invalid_argument("atom location must be finite");
    if (!std::isfinite(a.weight) || !(a.weight > 0.0))
      throw std::invalid_argument("atom weight must be positive and finite");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (atoms_[i].location == atoms_[j].location)
        throw std::invalid_argument("atom locations must be distinct");
  if (ac_ && ac_->arity() != 1)
    throw std::invalid_argument("the absolutely continuous part must have exactly one axis");
}

MixedMeasure MixedMeasure::point_mass(double location, double weight) {
  return MixedMeasure("point mass at " + describe(location), {{location, weight}}, std::nullopt);
}

MixedMeasure MixedMeasure::density(Kernel ac_part) {
  std::string label = ac_part.label();
  return MixedMeasure(std::move(label), {}, std::move(ac_part));
}

MixedMeasure MixedMeasure::lebesgue(Domain1D domain) {
  return density(Kernel::of("Lebesgue measure", {"t", domain}, [](double) { return 1.0; }));
}

MixedMeasure MixedMeasure::mixture(std::vector<PointMass> atoms, std::optional<Kernel> ac_part) {
  std::ostringstream label;
  label << "mixture of " << atoms.size() << " atom(s)";
  if (ac_part) label << " and " << ac_part->label();
  return MixedMeasure(label.str(), std::move(atoms), std::move(ac_part));
}

MixedMeasure MixedMeasure::reweighted(const std::function<double(double)>& factor,
                                      const std::string& label) const {
  std::vector<PointMass> atoms;
  for (const PointMass& a : atoms_) {
    const double f = factor(a.location);
    if (!std::isfinite(f) || f < 0.0)
      throw std::invalid_argument("reweighting factor must be finite and nonnegative at atoms");
    if (f > 0.0) atoms.push_back({a.location, a.weight * f});
  }
  std::optional<Kernel> ac;
  if (ac_) {
    const Kernel base = *ac_;
    ac = Kernel(label + " (a.c. part)", base.axes(),
                [base, factor](const std::vector<double>& p) { return base(p) * factor(p[0]); });
  }
  return MixedMeasure(label, std::move(atoms), std::move(ac));
}

TestFunction TestFunction::bump(double center, double half_width) {
  if (!std::isfinite(center) || !std::isfinite(half_width) || !(half_width > 0.0))
    throw std::invalid_argument("bump requires a finite center and positive half width");
  TestFunction t;
  t.eval = [center, half_width](double x) {
    const double u = 1.0 - std::abs(x - center) / half_width;
    return u > 0.0 ? u : 0.0;
  };
  t.lo = center - half_width;
  t.hi = center + half_width;
  t.kinks = {center - half_width, center, center + half_width};
  return t;
}

TestFunction TestFunction::combine(double alpha, const TestFunction& f, double beta,
                                   const TestFunction& g) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument("combination coefficients must be finite and nonnegative");
  TestFunction t;
  t.eval = [alpha, ef = f.eval, beta, eg = g.eval](double x) {
    return alpha * ef(x) + beta * eg(x);
  };
  t.lo = std::min(f.lo, g.lo);
  t.hi = std::max(f.hi, g.hi);
  t.kinks = f.kinks;
  t.kinks.insert(t.kinks.end(), g.kinks.begin(), g.kinks.end());
  return t;
}

TestFunctionFamily::TestFunctionFamily(std::vector<double> centers, double half_width)
    : half_width_(half_width) {
  if (centers.empty()) throw std::invalid_argument("a test family needs at least one center");
  if (!std::isfinite(half_width) || !(half_width > 0.0))
    throw std::invalid_argument("half width must be positive and finite");
  for (double c : centers) {
    if (!std::isfinite(c)) throw std::invalid_argument("bump centers must be finite");
    if (std::find(centers_.begin(), centers_.end(), c) == centers_.end()) centers_.push_back(c);
  }
}

TestFunctionFamily TestFunctionFamily::for_domain(const Domain1D& domain,
                                                  const std::vector<double>& must_include,
                                                  int count, double half_width) {
  if (count < 1) throw std::invalid_argument("the battery needs at least one bump");
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(count) + must_include.size());
  switch (domain.kind()) {
    case Domain1D::Kind::real_line:
      for (int k = 0; k < count; ++k)
        centers.push_back(count == 1 ? 0.0 : -10.0 + 20.0 * k / (count - 1));
      break;
    case Domain1D::Kind::half_line:
      for (int k = 1; k <= count; ++k) centers.push_back(domain.a() + 20.0 * k / count);
      break;
    case Domain1D::Kind::bounded:
      for (int k = 1; k <= count; ++k)
        centers.push_back(domain.a() + (domain.b() - domain.a()) * k / (count + 1));
      break;
  }
  centers.insert(centers.end(), must_include.begin(), must_include.end());
  return TestFunctionFamily(std::move(centers), half_width);
}

TestFunction TestFunctionFamily::member(std::size_t i) const {
  if (i >= centers_.size()) throw std::out_of_range("test family index out of range");
  return TestFunction::bump(centers_[i], half_width_);
}

ExtendedMass pair_integral(const MixedMeasure& m, const TestFunction& phi,
                           const QuadratureConfig& cfg) {
  double atom_sum = 0.0;
  for (const PointMass& a : m.atoms()) atom_sum += a.weight * phi.eval(a.location);
  if (!m.ac_part()) return ExtendedMass(atom_sum);

  const Kernel& k = *m.ac_part();
  const Axis& ax = k.axes()[0];
  double lo = phi.lo;
  double hi = phi.hi;
  if (ax.domain.kind() != Domain1D::Kind::real_line) lo = std::max(lo, ax.domain.a());
  if (ax.domain.kind() == Domain1D::Kind::bounded) hi = std::min(hi, ax.domain.b());
  if (!(lo < hi)) return ExtendedMass(atom_sum);

  std::vector<double> cuts = ax.breaks;
  cuts.insert(cuts.end(), phi.kinks.begin(), phi.kinks.end());
  const ExtendedMass ac = integrate(
      [&k, &phi](double t) { return k(std::vector<double>{t}) * phi.eval(t); },
      Domain1D::bounded(lo, hi), std::move(cuts), cfg);
  return ExtendedMass(atom_sum) + ac;
}

QVagueVerdict check_qvague(const std::function<MixedMeasure(double)>& seq,
                           const std::vector<double>& indices, const MixedMeasure& candidate,
                           const TestFunctionFamily& family, double tol,
                           std::optional<std::size_t> reference, const QuadratureConfig& cfg) {
  if (!seq) throw std::invalid_argument("the sequence accessor must be callable");
  if (indices.empty()) throw std::invalid_argument("at least one index is required");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  std::vector<ExtendedMass> cand(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    cand[i] = pair_integral(candidate, family.member(i), cfg);

  std::size_t ref = 0;
  if (reference) {
    ref = *reference;
    if (ref >= family.size())
      throw std::invalid_argument("reference index outside the test family");
    if (!cand[ref].is_finite() || !(cand[ref].value() > 0.0))
      throw ReferenceDegenerate(
          "the chosen reference has a zero or infinite candidate integral");
  } else {
    bool found = false;
    for (std::size_t i = 0; i < family.size() && !found; ++i)
      if (cand[i].is_finite() && cand[i].value() > 0.0) {
        ref = i;
        found = true;
      }
    if (!found)
      throw ReferenceDegenerate(
          "no family member has a positive finite integral against the candidate");
  }
  const TestFunction phi0 = family.member(ref);
  const double cand_ref = cand[ref].value();

  QVagueVerdict verdict;
  verdict.limit_label = candidate.label();
  for (double n : indices) {
    const MixedMeasure m = seq(n);
    const ExtendedMass denom = pair_integral(m, phi0, cfg);
    if (!denom.is_finite() || !(denom.value() > 0.0))
      throw ReferenceDegenerate("the reference integrates to zero or infinity at index " +
                                describe(n));
    const double a_n = cand_ref / denom.value();

    double err = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const ExtendedMass s = pair_integral(m, family.member(i), cfg);
      if (s.is_infinite() || cand[i].is_infinite())
        err = std::numeric_limits<double>::infinity();
      else
        // Scale-free distance: both measures are compared after rescaling to
        // a unit integral against the reference, so replacing the candidate
        // by any positive multiple yields the identical verdict.
        err = std::max(err, std::abs(a_n * s.value() - cand[i].value()) / cand_ref);
    }
    verdict.scale_sequence.push_back(a_n);
    verdict.errors.push_back(err);
  }

  bool settles = verdict.errors.back() <= tol;
  for (std::size_t i = 0; i + 1 < verdict.errors.size(); ++i)
    if (!(verdict.errors[i + 1] <= verdict.errors[i] + tol)) settles = false;
  verdict.converges = settles;
  verdict.worst_error = verdict.errors.back();
  return verdict;
}

double lindley_posterior_improper(double x) {
  return 1.0 / (1.0 + kSqrt2Pi * std::exp(0.5 * x * x));
}

double lindley_posterior_proper(double x, double n) {
  if (!std::isfinite(n) || !(n > 0.0))
    throw std::invalid_argument("the prior spread n must be positive and finite");
  const double s2 = 1.0 + n * n;
  return 1.0 / (1.0 + std::sqrt(1.0 / s2) * std::exp(n * n * x * x / (2.0 * s2)));
}

QVagueVerdict posterior_convergence_check(const std::function<MixedMeasure(double)>& prior_seq,
                                          const std::vector<double>& indices,
                                          const Kernel& likelihood, double x_obs,
                                          const MixedMeasure& candidate_prior,
                                          const TestFunctionFamily& family, double tol,
                                          const QuadratureConfig& cfg) {
  if (likelihood.arity() != 2)
    throw std::invalid_argument(
        "the likelihood must have two axes: the observation, then the parameter");
  if (!prior_seq) throw std::invalid_argument("the sequence accessor must be callable");
  const auto at_obs = [&likelihood, x_obs](double t) {
    return likelihood(std::vector<double>{x_obs, t});
  };
  const std::string tag = " given data " + describe(x_obs);
  const auto posterior_seq = [&prior_seq, at_obs, &tag](double n) {
    const MixedMeasure prior = prior_seq(n);
    return prior.reweighted(at_obs, prior.label() + tag);
  };
  const MixedMeasure posterior_candidate =
      candidate_prior.reweighted(at_obs, candidate_prior.label() + tag);
  return check_qvague(posterior_seq, indices, posterior_candidate, family, tol, std::nullopt,
                      cfg);
}

}  // namespace improper::qvague
