#pragma once

#include <cmath>
#include <compare>
#include <limits>

#include "copula_ot/errors.h"

namespace copula_ot {

// A real number or one of the two infinities. NaN is not representable.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  static ExtendedReal finite(double x) {
    if (!std::isfinite(x)) throw DomainError("ExtendedReal::finite: value is not finite");
    return ExtendedReal(x);
  }
  static constexpr ExtendedReal positive_infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal negative_infinity() {
    return ExtendedReal(-std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_positive_infinity() const { return value_ == std::numeric_limits<double>::infinity(); }
  bool is_negative_infinity() const { return value_ == -std::numeric_limits<double>::infinity(); }

  // Throws DomainError when infinite; use raw() to get the IEEE value instead.
  double value() const {
    if (!is_finite()) throw DomainError("ExtendedReal::value: value is infinite");
    return value_;
  }
  constexpr double raw() const { return value_; }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    // Total because NaN is excluded.
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  constexpr explicit ExtendedReal(double x) : value_(x) {}
  double value_ = 0.0;
};

}  // namespace copula_ot
