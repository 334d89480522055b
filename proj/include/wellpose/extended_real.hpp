#pragma once

#include <cmath>
#include <compare>
#include <ostream>

#include "wellpose/error.hpp"

namespace wellpose {

// A real number or +inf. Infinity is an explicit flag; IEEE infinities and
// NaN are rejected on construction.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(v)) throw DomainError("ExtendedReal: non-finite double; use ExtendedReal::infinity()");
  }

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }
  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }

  [[nodiscard]] double value() const {
    if (infinite_) throw DomainError("ExtendedReal: value() of +inf");
    return value_;
  }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(const ExtendedReal& a, double b) {
    if (a.infinite_) return infinity();
    return ExtendedReal(a.value_ - b);
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.infinite_) return os << "+inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace wellpose
