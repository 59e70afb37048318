#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "improper/domain.hpp"

namespace improper {

class UnknownAxis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A named coordinate of a kernel together with its range.  `breaks` lists
/// the points where the kernel jumps along this axis (an indicator's support
/// edge, say); integration splits the range there, which is what makes
/// discontinuous kernels integrate to full accuracy.
struct Axis {
  std::string name;
  Domain1D domain;
  std::vector<double> breaks{};
};

/// A possibly-improper density: a nonnegative function on a product of
/// one-dimensional ranges.  Immutable after construction; evaluation is pure,
/// so concurrent use needs no synchronization.  Nonnegativity is not checked
/// here — violations surface as NegativeDensity when the kernel is integrated.
class Kernel {
 public:
  using Eval = std::function<double(const std::vector<double>&)>;

  Kernel(std::string label, std::vector<Axis> axes, Eval eval)
      : label_(std::move(label)), axes_(std::move(axes)), eval_(std::move(eval)) {
    if (axes_.empty()) throw std::invalid_argument("kernel needs at least one axis");
    if (!eval_) throw std::invalid_argument("kernel needs an evaluation function");
  }

  static Kernel of(std::string label, Axis a, std::function<double(double)> f) {
    return Kernel(std::move(label), {std::move(a)},
                  [f = std::move(f)](const std::vector<double>& p) { return f(p[0]); });
  }
  static Kernel of(std::string label, Axis a, Axis b, std::function<double(double, double)> f) {
    return Kernel(std::move(label), {std::move(a), std::move(b)},
                  [f = std::move(f)](const std::vector<double>& p) { return f(p[0], p[1]); });
  }
  static Kernel of(std::string label, Axis a, Axis b, Axis c,
                   std::function<double(double, double, double)> f) {
    return Kernel(
        std::move(label), {std::move(a), std::move(b), std::move(c)},
        [f = std::move(f)](const std::vector<double>& p) { return f(p[0], p[1], p[2]); });
  }

  double operator()(const std::vector<double>& point) const { return eval_(point); }

  const std::string& label() const { return label_; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t arity() const { return axes_.size(); }

  std::size_t axis_index(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
      if (axes_[i].name == name) return i;
    throw UnknownAxis("kernel '" + label_ + "' has no axis named '" + std::string(name) + "'");
  }

  /// The kernel scaled by a positive constant (same measure class).
  Kernel scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("scale factor must be positive");
    auto inner = eval_;
    return Kernel(label_ + " (scaled)", axes_,
                  [c, inner](const std::vector<double>& p) { return c * inner(p); });
  }

 private:
  std::string label_;
  std::vector<Axis> axes_;
  Eval eval_;
};

}  // namespace improper
