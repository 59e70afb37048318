#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace improper {

/// Nonnegative mass where +infinity is an ordinary, representable outcome
/// rather than an error.  Finite values and the infinite state are mutually
/// exclusive by construction; NaN and negative inputs are rejected.
class ExtendedMass {
 public:
  ExtendedMass() : value_(0.0) {}

  // Implicit on purpose: finite masses should convert freely.
  ExtendedMass(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("mass must be a nonnegative number");
  }

  static ExtendedMass infinity() {
    ExtendedMass m;
    m.value_ = std::numeric_limits<double>::infinity();
    return m;
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return !is_finite(); }

  /// Numeric value; +inf when the mass is infinite.
  double value() const { return value_; }

  ExtendedMass& operator+=(const ExtendedMass& o) {
    value_ += o.value_;
    return *this;
  }
  friend ExtendedMass operator+(ExtendedMass a, const ExtendedMass& b) { return a += b; }

  /// Scale by a positive finite factor (infinite stays infinite).
  friend ExtendedMass operator*(double c, const ExtendedMass& m) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("scale factor must be positive and finite");
    return m.is_infinite() ? infinity() : ExtendedMass(c * m.value_);
  }

  friend bool operator==(const ExtendedMass& a, const ExtendedMass& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedMass& a, const ExtendedMass& b) {
    return a.value_ < b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedMass& m) {
    if (m.is_infinite()) return os << "inf";
    return os << m.value_;
  }

 private:
  double value_;
};

}  // namespace improper
