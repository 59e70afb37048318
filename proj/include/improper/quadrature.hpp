#pragma once

// Adaptive Gauss-Kronrod quadrature for nonnegative integrands over bounded,
// half-infinite and doubly infinite intervals.  Divergence is a regular
// outcome (ExtendedMass::infinity), not an error: infinite ranges are probed
// by repeatedly doubling the truncation radius (and shrinking the offset from
// a finite endpoint) and watching whether the added tail mass decays.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "improper/domain.hpp"
#include "improper/extended.hpp"

namespace improper {

/// Thrown when an integrand returns a negative value: the library deals in
/// densities, which must be nonnegative wherever they are evaluated.
class NegativeDensity : public std::runtime_error {
 public:
  explicit NegativeDensity(double at, double value)
      : std::runtime_error("negative density " + std::to_string(value) + " at t=" +
                           std::to_string(at)) {}
};

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;     // panel-split budget per integrate() call
  double divergence_threshold = 1e12;  // accumulated mass above this is reported as infinite

  // Tail-probing schedule for infinite ranges.  The window [a + offset0,
  // a + radius0] is integrated first; the radius then doubles and the offset
  // shrinks by 4x per step.  An extension step whose added mass fails to drop
  // below decay_ratio times the previous addition counts as non-decaying;
  // max_stalled_extensions such steps in a row mean the tail does not vanish
  // and the integral is reported infinite.
  double radius0 = 1.0;
  double offset0 = 0.5;
  double decay_ratio = 0.99;
  int max_stalled_extensions = 20;
  int min_extensions = 6;          // never accept convergence before this many steps per end
  double radius_cap = 1e12;        // beyond this the remaining tail is folded into one window
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss; nodes/weights for [-1,1],
// positive half (QUADPACK values).
inline constexpr double kKronrodNode[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kKronrodWeight[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
// Gauss weights, aligned with Kronrod nodes 1, 3, 5 and the centre node.
inline constexpr double kGaussWeight[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
  double a, b;
  double integral;
  double error;
};

// One Gauss-Kronrod application on [a,b].  Sets hit_nonfinite when the
// integrand returns inf or NaN (the caller then reports an infinite result).
template <class F>
Panel gk15(F&& f, double a, double b, bool& hit_nonfinite) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  auto probe = [&](double t) {
    const double y = f(t);
    if (y < 0.0) throw NegativeDensity(t, y);
    if (!std::isfinite(y)) hit_nonfinite = true;
    return y;
  };

  const double fc = probe(c);
  if (hit_nonfinite) return {a, b, 0.0, 0.0};
  double kronrod = kKronrodWeight[7] * fc;
  double gauss = kGaussWeight[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double d = h * kKronrodNode[i];
    const double pair = probe(c + d) + probe(c - d);
    if (hit_nonfinite) return {a, b, 0.0, 0.0};
    kronrod += kKronrodWeight[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeight[i / 2] * pair;
  }
  kronrod *= h;
  gauss *= h;

  double err = std::pow(200.0 * std::abs(kronrod - gauss), 1.5);
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, err};
}

// Adaptive subdivision on a bounded interval.  `budget` is shared across all
// windows of one integrate() call.  Returns infinity as soon as any node
// evaluates to inf/NaN or the accumulated estimate passes the divergence
// threshold.
template <class F>
ExtendedMass integrate_bounded(F&& f, double a, double b, const QuadratureConfig& cfg,
                               int& budget) {
  bool hit_nonfinite = false;
  std::vector<Panel> work;
  work.push_back(gk15(f, a, b, hit_nonfinite));
  if (hit_nonfinite) return ExtendedMass::infinity();

  double accepted = 0.0;
  double pending = work.back().integral;
  const double min_width =
      16.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(a), std::abs(b), 1.0});

  while (!work.empty()) {
    if (accepted + pending > cfg.divergence_threshold) return ExtendedMass::infinity();
    const Panel p = work.back();
    work.pop_back();
    pending -= p.integral;

    if (p.b - p.a <= min_width || budget <= 0) {
      accepted += p.integral;
      continue;
    }

    const double mid = 0.5 * (p.a + p.b);
    Panel left = gk15(f, p.a, mid, hit_nonfinite);
    if (hit_nonfinite) return ExtendedMass::infinity();
    Panel right = gk15(f, mid, p.b, hit_nonfinite);
    if (hit_nonfinite) return ExtendedMass::infinity();
    const double refined = left.integral + right.integral;

    // Two independent error signals must both pass before a panel is kept:
    // the Gauss-vs-Kronrod estimate, and the disagreement with the halved
    // refinement.  A jump can silence either signal by landing where the two
    // rules happen to agree, but hardly both at once, and the refined value
    // is committed, never the coarse one.
    const double err = std::max(p.error, std::abs(p.integral - refined));
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(refined));
    if (err <= tol) {
      accepted += refined;
      continue;
    }
    --budget;
    pending += refined;
    work.push_back(left);
    work.push_back(right);
  }
  return ExtendedMass(std::max(accepted, 0.0));
}

// Half line [lo, +inf), mapped to u in (0,1) via t = lo + u/(1-u).  The
// integral is built up window by window: a core window first, then upper
// windows with doubling radius and lower windows with quartering offset.
// Each direction stops once its additions are negligible, or declares the
// whole integral infinite when additions refuse to decay.
template <class F>
ExtendedMass integrate_half_line(F&& f, double lo, const QuadratureConfig& cfg) {
  auto g = [&f, lo](double u) {
    const double om = 1.0 - u;
    return f(lo + u / om) / (om * om);
  };
  auto to_u = [](double r) { return r / (1.0 + r); };

  int budget = cfg.max_subdivisions;
  double total = 0.0;

  auto add_window = [&](double u_lo, double u_hi, bool& infinite) -> double {
    ExtendedMass m = integrate_bounded(g, u_lo, u_hi, cfg, budget);
    if (m.is_infinite()) {
      infinite = true;
      return 0.0;
    }
    total += m.value();
    if (total > cfg.divergence_threshold) infinite = true;
    return m.value();
  };

  bool infinite = false;
  add_window(to_u(cfg.offset0), to_u(cfg.radius0), infinite);
  if (infinite) return ExtendedMass::infinity();

  // Upper tail: double the truncation radius until additions are negligible.
  {
    double radius = cfg.radius0;
    double prev_add = -1.0;
    int stalled = 0;
    for (int step = 1;; ++step) {
      if (radius >= cfg.radius_cap) {
        // Fold whatever is left of the tail into a single window reaching u=1
        // (the endpoint itself is never evaluated by the open rule).
        add_window(to_u(radius), 1.0, infinite);
        if (infinite) return ExtendedMass::infinity();
        break;
      }
      const double next = 2.0 * radius;
      const double add = add_window(to_u(radius), to_u(next), infinite);
      if (infinite) return ExtendedMass::infinity();
      radius = next;
      // A zero running total means no mass has been sighted yet; keep
      // searching to the cap so mass far from the origin cannot be missed.
      if (step >= cfg.min_extensions && total > 0.0 &&
          add <= std::max(cfg.abs_tol, cfg.rel_tol * total))
        break;
      if (prev_add >= 0.0 && add > cfg.decay_ratio * prev_add) {
        if (++stalled >= cfg.max_stalled_extensions) return ExtendedMass::infinity();
      } else {
        stalled = 0;
      }
      prev_add = add;
    }
  }

  // Lower end: shrink the offset from the finite endpoint towards zero.
  {
    double offset = cfg.offset0;
    double prev_add = -1.0;
    int stalled = 0;
    const double offset_floor = 1e-280;
    for (int step = 1;; ++step) {
      if (offset <= offset_floor) {
        add_window(0.0, to_u(offset), infinite);
        if (infinite) return ExtendedMass::infinity();
        break;
      }
      const double next = 0.25 * offset;
      const double add = add_window(to_u(next), to_u(offset), infinite);
      if (infinite) return ExtendedMass::infinity();
      offset = next;
      if (step >= cfg.min_extensions && total > 0.0 &&
          add <= std::max(cfg.abs_tol, cfg.rel_tol * total))
        break;
      if (prev_add >= 0.0 && add > cfg.decay_ratio * prev_add) {
        if (++stalled >= cfg.max_stalled_extensions) return ExtendedMass::infinity();
      } else {
        stalled = 0;
      }
      prev_add = add;
    }
  }

  return ExtendedMass(total);
}

// Window-schedule quadrature without any mass-location rescue.
template <class F>
ExtendedMass integrate_plain(F&& f, const Domain1D& domain, const QuadratureConfig& cfg) {
  switch (domain.kind()) {
    case Domain1D::Kind::bounded: {
      int budget = cfg.max_subdivisions;
      return integrate_bounded(f, domain.a(), domain.b(), cfg, budget);
    }
    case Domain1D::Kind::half_line:
      return integrate_half_line(f, domain.a(), cfg);
    case Domain1D::Kind::real_line: {
      ExtendedMass pos = integrate_half_line(f, 0.0, cfg);
      if (pos.is_infinite()) return pos;
      ExtendedMass neg = integrate_half_line([&f](double t) { return f(-t); }, 0.0, cfg);
      if (neg.is_infinite()) return neg;
      return pos + neg;
    }
  }
  throw std::logic_error("unreachable domain kind");
}

// Deterministic coarse grid argmax of g over [lo, hi]; NaN values ignored.
template <class G>
double coarse_argmax(G&& g, double lo, double hi, double step, double& best_value) {
  double best_x = lo;
  best_value = 0.0;
  for (double x = lo; x <= hi; x += step) {
    const double v = g(x);
    if (std::isfinite(v) && v > best_value) {
      best_value = v;
      best_x = x;
    }
  }
  return best_x;
}

// Deterministic uphill walk followed by parabolic shrinking around a local
// maximum of g, starting at c0 and never leaving [lo, hi].  Used purely to
// place quadrature nodes: it never contributes to an integral value, so a
// poor result degrades accuracy at worst, never correctness of what is
// actually summed.
template <class G>
double refine_peak(G&& g, double c0,
                   double lo = -std::numeric_limits<double>::infinity(),
                   double hi = std::numeric_limits<double>::infinity()) {
  auto eval = [&](double x) {
    if (x < lo || x > hi) return -1.0;  // outside: never an improvement
    const double v = g(x);
    return std::isfinite(v) ? v : -1.0;
  };
  double c = std::clamp(c0, lo, hi);
  double fc = eval(c);
  if (!(fc > 0.0)) {
    for (double d : {1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0}) {
      const double v = eval(c + d);
      if (v > 0.0) {
        c += d;
        fc = v;
        break;
      }
    }
    if (!(fc > 0.0)) return c;
  }
  double h = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double fl = eval(c - h), fr = eval(c + h);
    if (fr > fc && fr >= fl) {
      c += h;
      fc = fr;
      h *= 1.6;
    } else if (fl > fc) {
      c -= h;
      fc = fl;
      h *= 1.6;
    } else {
      break;
    }
  }
  h = std::min(h, 1.0);
  for (int it = 0; it < 80 && h > 1e-10; ++it) {
    const double fl = eval(c - h), fc3 = fc, fr = eval(c + h);
    const double denom = fl - 2.0 * fc3 + fr;
    if (denom < 0.0 && fl >= 0.0 && fr >= 0.0) {
      const double step = std::clamp(0.5 * h * (fl - fr) / denom, -h, h);
      const double cn = std::clamp(c + step, lo, hi);
      const double fn = eval(cn);
      if (fn >= fc) {
        c = cn;
        fc = fn;
      }
    }
    h *= 0.5;
  }
  return c;
}

// Bounded integral with a forced initial partition, for intervals wide
// enough that a single opening panel could overlook a narrow feature.
template <class F>
ExtendedMass integrate_bounded_partitioned(F&& f, double a, double b, int pieces,
                                           const QuadratureConfig& cfg, int& budget) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    ExtendedMass m = integrate_bounded(f, a + i * w, a + (i + 1) * w, cfg, budget);
    if (m.is_infinite()) return m;
    total += m.value();
    if (total > cfg.divergence_threshold) return ExtendedMass::infinity();
  }
  return ExtendedMass(total);
}

}  // namespace detail

/// Integrate a nonnegative integrand over the given range.  Returns the mass,
/// which may be infinite; throws NegativeDensity if f evaluates negative.
///
/// The window schedule expands geometrically, so a narrow concentration of
/// mass far from the domain's anchor point can in principle slip between
/// quadrature nodes.  When a pass over an unbounded range comes back (next
/// to) empty, a deterministic scan of the first few hundred units hunts for
/// missed mass; on a hit the integral is recomputed with nodes centred on it
/// (a pure change of variables).
template <class F>
ExtendedMass integrate(F&& f, const Domain1D& domain,
                       const QuadratureConfig& cfg = QuadratureConfig{}) {
  ExtendedMass first = detail::integrate_plain(f, domain, cfg);
  if (first.is_infinite() || first.value() > cfg.abs_tol || domain.kind() == Domain1D::Kind::bounded)
    return first;

  if (domain.kind() == Domain1D::Kind::real_line) {
    double seen = 0.0;
    double c = detail::coarse_argmax(f, -256.0, 256.0, 0.5, seen);
    if (!(seen > 0.0)) return first;
    c = detail::refine_peak(f, c);
    if (std::abs(c) < 4.0) return first;
    ExtendedMass moved =
        detail::integrate_plain([&f, c](double t) { return f(t + c); }, domain, cfg);
    return moved.value() > first.value() ? moved : first;
  }

  // Half line: mass found at distance c from the endpoint; cover the stretch
  // up to beyond it with a forced partition fine enough to resolve it, then
  // resume the usual schedule for the remainder.
  const double lo = domain.a();
  double seen = 0.0;
  double c = detail::coarse_argmax([&](double t) { return f(t); }, lo + 0.25, lo + 256.0, 0.5, seen);
  if (!(seen > 0.0)) return first;
  c = detail::refine_peak(f, c, lo + 0.125, lo + 260.0);
  const double edge = std::min(lo + 520.0, std::max(lo + 16.0, c + std::max(16.0, c - lo)));
  int budget = cfg.max_subdivisions;
  ExtendedMass head = detail::integrate_bounded_partitioned(f, lo, edge, 64, cfg, budget);
  if (head.is_infinite()) return head;
  ExtendedMass tail = detail::integrate_half_line(f, edge, cfg);
  if (tail.is_infinite()) return tail;
  ExtendedMass rescued = head + tail;
  return rescued.value() > first.value() ? rescued : first;
}

/// Integrate with declared discontinuity points.  The range is split at every
/// breakpoint it contains and the pieces are integrated separately, so each
/// piece presents a smooth integrand.  Declaring breakpoints is the reliable
/// way to integrate indicators and other jumpy densities: a jump that lands
/// in the sliver between a panel's outermost node and its endpoint is
/// invisible to the error estimate at every refinement level, so adaptivity
/// alone cannot be made watertight against it.
template <class F>
ExtendedMass integrate(F&& f, const Domain1D& domain, std::vector<double> breakpoints,
                       const QuadratureConfig& cfg = QuadratureConfig{}) {
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> cuts;
  for (double s : breakpoints) {
    if (!std::isfinite(s) || !domain.contains(s)) continue;
    if (!cuts.empty() && !(s > cuts.back())) continue;
    cuts.push_back(s);
  }
  if (cuts.empty()) return integrate(f, domain, cfg);

  ExtendedMass total{0.0};
  double lo = domain.a();
  std::size_t next = 0;
  if (domain.kind() == Domain1D::Kind::real_line) {
    const double s0 = cuts.front();
    ExtendedMass head =
        integrate([&f, s0](double t) { return f(s0 - t); }, Domain1D::half_line(), cfg);
    if (head.is_infinite()) return head;
    total += head;
    lo = s0;
    next = 1;
  }
  for (; next < cuts.size(); ++next) {
    ExtendedMass piece = integrate(f, Domain1D::bounded(lo, cuts[next]), cfg);
    if (piece.is_infinite()) return piece;
    total += piece;
    if (total.value() > cfg.divergence_threshold) return ExtendedMass::infinity();
    lo = cuts[next];
  }
  ExtendedMass tail = domain.kind() == Domain1D::Kind::bounded
                          ? integrate(f, Domain1D::bounded(lo, domain.b()), cfg)
                          : integrate(f, Domain1D::half_line(lo), cfg);
  if (tail.is_infinite()) return tail;
  total += tail;
  if (total.value() > cfg.divergence_threshold) return ExtendedMass::infinity();
  return total;
}

template <class F>
ExtendedMass integrate(F&& f, const Domain1D& domain, std::initializer_list<double> breakpoints,
                       const QuadratureConfig& cfg = QuadratureConfig{}) {
  return integrate(f, domain, std::vector<double>(breakpoints), cfg);
}

namespace detail {

// Fit of a straight line c(y) = a + b*y through located mass centres of the
// inner sections of a two-dimensional kernel.
struct RidgeModel {
  bool valid = false;
  double a = 0.0;
  double b = 0.0;
};

// Probe inner sections x -> f(x, y) at a handful of anchor ordinates and
// track how the location of their mass moves with y.  A good linear fit lets
// the iterated integral place inner nodes where the mass actually is, which
// is what keeps ridge-shaped kernels (mass along x + b*y = const) honest:
// without it the inner integral silently loses the ridge once |y| is large
// and the outer pass mistakes divergence for convergence.
template <class F>
RidgeModel detect_ridge(F&& f) {
  constexpr double kAnchors[] = {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0};
  std::vector<double> ys, cs;
  for (double ya : kAnchors) {
    auto section = [&f, ya](double x) { return f(x, ya); };
    double seen = 0.0;
    double c = coarse_argmax(section, -64.0, 64.0, 0.5, seen);
    if (!(seen > 0.0)) continue;
    cs.push_back(refine_peak(section, c));
    ys.push_back(ya);
  }
  RidgeModel model;
  if (cs.size() < 5) return model;
  const auto n = static_cast<double>(ys.size());
  double sy = 0, sc = 0, syy = 0, syc = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    sy += ys[i];
    sc += cs[i];
    syy += ys[i] * ys[i];
    syc += ys[i] * cs[i];
  }
  const double denom = n * syy - sy * sy;
  if (denom <= 0.0) return model;
  model.b = (n * syc - sy * sc) / denom;
  model.a = (sc - model.b * sy) / n;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (std::abs(model.a + model.b * ys[i] - cs[i]) > 1.0) return model;
  }
  model.valid = true;
  return model;
}

}  // namespace detail

/// Iterated two-dimensional integral: inner over x, outer over y.  An
/// infinite inner integral on a set of positive measure makes the whole
/// result infinite (the outer pass sees an infinite node value).  For fully
/// unbounded kernels the inner integral is recentred on the tracked mass
/// location (see detail::detect_ridge).  Declared discontinuity points of
/// either coordinate are honoured as in the one-dimensional overload.
template <class F>
ExtendedMass integrate2d(F&& f, const Domain1D& dx, const Domain1D& dy,
                         const std::vector<double>& x_breaks,
                         const std::vector<double>& y_breaks,
                         const QuadratureConfig& cfg = QuadratureConfig{}) {
  if (dx.kind() == Domain1D::Kind::real_line && dy.kind() == Domain1D::Kind::real_line &&
      x_breaks.empty() && y_breaks.empty()) {
    const detail::RidgeModel ridge = detail::detect_ridge(f);
    if (ridge.valid) {
      auto outer = [&f, ridge, &cfg](double y) -> double {
        auto section = [&f, y](double x) { return f(x, y); };
        const double c = detail::refine_peak(section, ridge.a + ridge.b * y);
        ExtendedMass inner =
            integrate([&section, c](double t) { return section(t + c); },
                      Domain1D::real_line(), cfg);
        return inner.value();
      };
      return integrate(outer, dy, cfg);
    }
  }
  auto outer = [&](double y) -> double {
    ExtendedMass inner = integrate([&](double x) { return f(x, y); }, dx, x_breaks, cfg);
    return inner.value();  // +inf propagates through the node check
  };
  return integrate(outer, dy, y_breaks, cfg);
}

template <class F>
ExtendedMass integrate2d(F&& f, const Domain1D& dx, const Domain1D& dy,
                         const QuadratureConfig& cfg = QuadratureConfig{}) {
  return integrate2d(f, dx, dy, {}, {}, cfg);
}

}  // namespace improper
