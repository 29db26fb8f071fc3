#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace circirf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an arbitrary real to [0, 2pi).
inline double canonical_radians(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round back up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// A point on the unit circle, stored in radians in [0, 2pi).
class Angle {
public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(canonical_radians(radians)) {}

  static Angle from_degrees(double degrees) { return Angle(degrees * kPi / 180.0); }

  double radians() const noexcept { return value_; }
  double degrees() const noexcept { return value_ * 180.0 / kPi; }

  Angle operator+(Angle other) const { return Angle(value_ + other.value_); }
  Angle operator-(Angle other) const { return Angle(value_ - other.value_); }
  Angle operator-() const { return Angle(-value_); }

  friend bool operator==(Angle a, Angle b) noexcept { return a.value_ == b.value_; }

private:
  double value_ = 0.0;
};

/// Geodesic distance on the circle, in [0, pi].
inline double angular_distance(Angle x, Angle y) {
  const double d = std::abs(x.radians() - y.radians());
  return std::min(d, kTwoPi - d);
}

}  // namespace circirf
