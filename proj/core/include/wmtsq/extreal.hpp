#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace wmtsq {

/// Nonnegative extended real: the value domain of all behavioral distances.
/// Infinity is a first-class value; arithmetic saturates.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT: implicit by design

  static constexpr ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_infinite() const { return std::isinf(v_); }
  constexpr bool is_finite() const { return !std::isinf(v_); }
  constexpr double value() const { return v_; }

  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) {
    return ExtReal(a.v_ + b.v_);
  }
  friend constexpr ExtReal operator*(double s, ExtReal a) {
    if (a.is_infinite()) return a;  // 0 * inf must stay inf for discounting
    return ExtReal(s * a.v_);
  }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) {
    return a.v_ <=> b.v_;
  }
  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

 private:
  double v_ = 0.0;
};

inline ExtReal ext_min(ExtReal a, ExtReal b) { return a < b ? a : b; }
inline ExtReal ext_max(ExtReal a, ExtReal b) { return a < b ? b : a; }

/// Canonical text form: nine decimals, or "inf".
std::string format_ext(ExtReal v);

/// Discounting factor, strictly inside (0,1).
class DiscountFactor {
 public:
  explicit DiscountFactor(double lambda);
  double value() const { return lambda_; }

 private:
  double lambda_;
};

inline constexpr double kDefaultLambda = 0.9;
inline constexpr double kDefaultTolerance = 1e-9;

}  // namespace wmtsq
