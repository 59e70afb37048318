#include "improper/measures.hpp"

#include <algorithm>
#include <cstddef>

namespace improper {

namespace {

// Integrate the joint over the axes listed in `over` (ascending), all other
// coordinates pinned to the values already placed in `point`.  The point
// vector is used as mutable scratch; evaluation is strictly sequential.
ExtendedMass integrate_over(const Kernel& k, const std::vector<std::size_t>& over,
                            std::vector<double>& point, const QuadratureConfig& cfg) {
  if (over.empty()) throw std::logic_error("integrate_over needs at least one axis");
  if (over.size() == 1) {
    const std::size_t ax = over[0];
    auto f = [&k, &point, ax](double t) {
      point[ax] = t;
      return k(point);
    };
    return integrate(f, k.axes()[ax].domain, k.axes()[ax].breaks, cfg);
  }
  if (over.size() == 2) {
    const std::size_t ax = over[0], ay = over[1];
    auto f = [&k, &point, ax, ay](double x, double y) {
      point[ax] = x;
      point[ay] = y;
      return k(point);
    };
    return integrate2d(f, k.axes()[ax].domain, k.axes()[ay].domain, k.axes()[ax].breaks,
                       k.axes()[ay].breaks, cfg);
  }
  const std::size_t outer_axis = over.back();
  const std::vector<std::size_t> rest(over.begin(), over.end() - 1);
  auto f = [&](double t) -> double {
    point[outer_axis] = t;
    return integrate_over(k, rest, point, cfg).value();
  };
  return integrate(f, k.axes()[outer_axis].domain, k.axes()[outer_axis].breaks, cfg);
}

std::vector<std::size_t> resolve_axes(const Kernel& k, const std::vector<std::string>& names) {
  if (names.empty()) throw std::invalid_argument("axis list must not be empty");
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(k.axis_index(n));
  std::vector<std::size_t> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("axis list contains a duplicate");
  return idx;
}

std::vector<std::size_t> complement_axes(const Kernel& k, const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k.arity(); ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(i);
  return out;
}

// Walk the product grid of probe points over the given axes, short-circuiting
// as soon as `visit` returns false.
bool for_each_probe(const Kernel& k, const std::vector<std::size_t>& axes,
                    const std::function<bool(const std::vector<double>&)>& visit) {
  std::vector<std::vector<double>> grids;
  grids.reserve(axes.size());
  for (std::size_t ax : axes) grids.push_back(probe_points(k.axes()[ax].domain));
  std::vector<double> pt(axes.size(), 0.0);
  std::function<bool(std::size_t)> walk = [&](std::size_t level) -> bool {
    if (level == axes.size()) return visit(pt);
    for (double v : grids[level]) {
      pt[level] = v;
      if (!walk(level + 1)) return false;
    }
    return true;
  };
  return walk(0);
}

}  // namespace

std::vector<double> probe_points(const Domain1D& domain, int n) {
  if (n < 3) throw std::invalid_argument("probe count must be at least 3");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(n));
  switch (domain.kind()) {
    case Domain1D::Kind::bounded: {
      for (int i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / (n + 1);
        pts.push_back(domain.a() + (domain.b() - domain.a()) * u);
      }
      break;
    }
    case Domain1D::Kind::half_line: {
      for (int i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / (n + 1);
        pts.push_back(domain.a() + u / (1.0 - u));
      }
      break;
    }
    case Domain1D::Kind::real_line: {
      const int m = (n - 1) / 2;
      pts.push_back(0.0);
      for (int i = 1; i <= m; ++i) {
        const double u = static_cast<double>(i) / (m + 1);
        const double s = u / (1.0 - u);
        pts.push_back(s);
        pts.push_back(-s);
      }
      break;
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

ExtendedMass total_mass(const Kernel& k, const QuadratureConfig& cfg) {
  std::vector<std::size_t> all(k.arity());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<double> point(k.arity(), 0.0);
  return integrate_over(k, all, point, cfg);
}

MarginalResult marginal(const Kernel& joint, const std::vector<std::string>& keep_axes,
                        const QuadratureConfig& cfg) {
  const std::vector<std::size_t> keep = resolve_axes(joint, keep_axes);
  const std::vector<std::size_t> over = complement_axes(joint, keep);
  if (over.empty())
    throw std::invalid_argument("marginal must integrate out at least one axis");

  auto density = [joint, keep, over, cfg](const std::vector<double>& pt) -> ExtendedMass {
    if (pt.size() != keep.size())
      throw std::invalid_argument("marginal evaluated with wrong point arity");
    std::vector<double> point(joint.arity(), 0.0);
    for (std::size_t i = 0; i < keep.size(); ++i) point[keep[i]] = pt[i];
    return integrate_over(joint, over, point, cfg);
  };

  MarginalResult out;
  out.density = density;
  out.sigma_finite = for_each_probe(
      joint, keep, [&](const std::vector<double>& pt) { return density(pt).is_finite(); });

  // Total mass of the marginal = total mass of the joint, computed through
  // the marginal density so the infinite-node short-circuit applies.
  if (keep.size() == 1) {
    out.mass = integrate([&](double t) { return density({t}).value(); },
                         joint.axes()[keep[0]].domain, joint.axes()[keep[0]].breaks, cfg);
  } else if (keep.size() == 2) {
    out.mass = integrate2d([&](double x, double y) { return density({x, y}).value(); },
                           joint.axes()[keep[0]].domain, joint.axes()[keep[1]].domain,
                           joint.axes()[keep[0]].breaks, joint.axes()[keep[1]].breaks, cfg);
  } else {
    throw std::invalid_argument("marginal supports kept blocks of one or two axes");
  }
  return out;
}

MarginalResult marginal(const Kernel& joint, const std::string& keep_axis,
                        const QuadratureConfig& cfg) {
  return marginal(joint, std::vector<std::string>{keep_axis}, cfg);
}

bool is_sigma_finite(const Kernel& joint, const std::vector<std::string>& axes,
                     const QuadratureConfig& cfg) {
  const std::vector<std::size_t> keep = resolve_axes(joint, axes);
  const std::vector<std::size_t> over = complement_axes(joint, keep);
  if (over.empty())
    throw std::invalid_argument("sigma-finiteness check must integrate out at least one axis");
  return for_each_probe(joint, keep, [&](const std::vector<double>& pt) {
    std::vector<double> point(joint.arity(), 0.0);
    for (std::size_t i = 0; i < keep.size(); ++i) point[keep[i]] = pt[i];
    return integrate_over(joint, over, point, cfg).is_finite();
  });
}

bool is_sigma_finite(const Kernel& joint, const std::string& axis, const QuadratureConfig& cfg) {
  return is_sigma_finite(joint, std::vector<std::string>{axis}, cfg);
}

ProperDensity condition(const Kernel& joint, const std::vector<std::string>& given_axes,
                        const std::vector<double>& given_values, const QuadratureConfig& cfg) {
  const std::vector<std::size_t> given = resolve_axes(joint, given_axes);
  if (given.size() != given_values.size())
    throw std::invalid_argument("one value per conditioning axis required");

  if (!is_sigma_finite(joint, given_axes, cfg))
    throw NotSigmaFinite("conditioning block of '" + joint.label() +
                         "' is not sigma-finite: the conditional law does not exist");

  const std::vector<std::size_t> free = complement_axes(joint, given);
  if (free.size() != 1)
    throw std::invalid_argument("conditioning must leave exactly one free axis");
  const std::size_t free_ax = free[0];
  const Domain1D free_dom = joint.axes()[free_ax].domain;

  std::vector<double> base(joint.arity(), 0.0);
  for (std::size_t i = 0; i < given.size(); ++i) base[given[i]] = given_values[i];

  auto slice = [joint, base, free_ax](double t) mutable {
    base[free_ax] = t;
    return joint(base);
  };
  const ExtendedMass mass = integrate(slice, free_dom, joint.axes()[free_ax].breaks, cfg);
  if (mass.is_infinite())
    throw DivergentSlice("slice of '" + joint.label() + "' has infinite mass");
  if (mass.value() <= 0.0)
    throw ZeroSlice("slice of '" + joint.label() + "' carries no mass");

  const double z = mass.value();
  return ProperDensity{[slice, z](double t) mutable { return slice(t) / z; }, free_dom, z};
}

ProperDensity condition(const Kernel& joint, const std::string& given_axis, double given_value,
                        const QuadratureConfig& cfg) {
  return condition(joint, std::vector<std::string>{given_axis},
                   std::vector<double>{given_value}, cfg);
}

ProperDensity bayes_posterior(const Kernel& prior,
                              const std::function<double(double, double)>& likelihood,
                              double x_obs, const QuadratureConfig& cfg) {
  if (prior.arity() != 1)
    throw std::invalid_argument("bayes_posterior expects a one-dimensional prior");
  const Domain1D dom = prior.axes()[0].domain;

  auto raw = [prior, likelihood, x_obs](double theta) {
    return likelihood(x_obs, theta) * prior(std::vector<double>{theta});
  };
  const ExtendedMass evidence = integrate(raw, dom, prior.axes()[0].breaks, cfg);
  if (evidence.is_infinite())
    throw NotSigmaFinite("evidence integral diverges at the observed point: the data are not "
                         "sigma-finite there and no posterior exists");
  if (evidence.value() <= 0.0)
    throw ZeroEvidence("evidence is zero at the observed point");

  const double z = evidence.value();
  return ProperDensity{[raw, z](double t) { return raw(t) / z; }, dom, z};
}

}  // namespace improper
