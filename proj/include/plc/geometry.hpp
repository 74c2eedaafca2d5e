#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace plc {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product; positive when b lies to the left of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

/// Counter-clockwise rotation.
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

constexpr Vec2 rotate_ccw90(Vec2 v) { return {-v.y, v.x}; }
constexpr Vec2 rotate_cw90(Vec2 v) { return {v.y, -v.x}; }

inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}
  Pose2(Vec2 p, double theta_) : Pose2(p.x, p.y, theta_) {}

  Vec2 position() const { return {x, y}; }
  Vec2 forward() const { return unit_from_angle(theta); }
  Vec2 left() const { return rotate_ccw90(forward()); }

  /// Robot-frame point to world frame.
  Vec2 transform(Vec2 local) const { return position() + rotate(local, theta); }
  /// World point to robot frame.
  Vec2 inverse_transform(Vec2 world) const { return rotate(world - position(), -theta); }

  bool operator==(const Pose2&) const = default;
};

struct Footprint {
  double length = 1.13;
  double width = 0.65;

  double half_length() const { return 0.5 * length; }
  double half_width() const { return 0.5 * width; }
  double circumradius() const { return std::hypot(half_length(), half_width()); }
};

/// Corners of the oriented footprint rectangle, counter-clockwise from front-left.
inline std::array<Vec2, 4> footprint_corners(const Pose2& pose, const Footprint& fp) {
  const double hl = fp.half_length();
  const double hw = fp.half_width();
  return {pose.transform({hl, hw}), pose.transform({-hl, hw}), pose.transform({-hl, -hw}),
          pose.transform({hl, -hw})};
}

/// Euclidean distance from a point to the oriented footprint rectangle (0 inside).
inline double distance_to_footprint(const Pose2& pose, const Footprint& fp, Vec2 p) {
  const Vec2 local = pose.inverse_transform(p);
  const double dx = std::max(std::abs(local.x) - fp.half_length(), 0.0);
  const double dy = std::max(std::abs(local.y) - fp.half_width(), 0.0);
  return std::hypot(dx, dy);
}

}  // namespace plc
