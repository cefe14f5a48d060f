#pragma once

#include <compare>
#include <numbers>

namespace pdsq {

/// Plane angle. Stored in radians; construct through the named factories so the
/// unit is always explicit at the call site.
class Angle {
 public:
  constexpr Angle() = default;

  static constexpr Angle radians(double value) { return Angle(value); }
  static constexpr Angle degrees(double value) { return Angle(value * std::numbers::pi / 180.0); }

  constexpr double rad() const { return radians_; }
  constexpr double deg() const { return radians_ * 180.0 / std::numbers::pi; }

  constexpr Angle operator-() const { return Angle(-radians_); }
  constexpr Angle operator+(Angle other) const { return Angle(radians_ + other.radians_); }
  constexpr Angle operator-(Angle other) const { return Angle(radians_ - other.radians_); }

  constexpr auto operator<=>(const Angle&) const = default;

 private:
  constexpr explicit Angle(double r) : radians_(r) {}
  double radians_ = 0.0;
};

}  // namespace pdsq
