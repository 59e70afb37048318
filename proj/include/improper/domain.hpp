#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace improper {

class InvalidDomain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One-dimensional integration range: bounded (a,b), half line (a,+inf),
/// or the whole real line.
class Domain1D {
 public:
  enum class Kind { bounded, half_line, real_line };

  static Domain1D bounded(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw InvalidDomain("bounded domain requires finite endpoints a < b");
    return Domain1D(Kind::bounded, a, b);
  }
  static Domain1D half_line(double a = 0.0) {
    if (!std::isfinite(a)) throw InvalidDomain("half line requires a finite lower endpoint");
    return Domain1D(Kind::half_line, a, std::numeric_limits<double>::infinity());
  }
  static Domain1D real_line() {
    return Domain1D(Kind::real_line, -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity());
  }

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }

  bool contains(double t) const {
    switch (kind_) {
      case Kind::bounded: return t > a_ && t < b_;
      case Kind::half_line: return t > a_;
      case Kind::real_line: return std::isfinite(t);
    }
    return false;
  }

  bool is_infinite() const { return kind_ != Kind::bounded; }

 private:
  Domain1D(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

  Kind kind_;
  double a_, b_;
};

}  // namespace improper
