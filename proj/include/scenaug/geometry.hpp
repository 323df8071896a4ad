// 2-D vectors, angle wrapping, and planar rigid transforms.
#pragma once

#include <cmath>

namespace scenaug {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Maps any angle into (-pi, pi].
inline double wrap_angle(double rad) {
  double r = std::remainder(rad, 2.0 * kPi);
  return r <= -kPi ? r + 2.0 * kPi : r;
}

// theta_a - theta_b on the circle, result in (-pi, pi].
inline double wrapped_heading_delta(double theta_a, double theta_b) {
  return wrap_angle(theta_a - theta_b);
}

// Planar rigid motion p -> R(rotation) * p + translation.
// Directions (velocities) transform with rotate() only; headings shift by
// rotation and re-wrap.
class RigidTransform2D {
 public:
  RigidTransform2D() : RigidTransform2D(0.0, {}) {}
  RigidTransform2D(double rotation, const Vec2& translation)
      : rotation_(rotation),
        translation_(translation),
        cos_(std::cos(rotation)),
        sin_(std::sin(rotation)) {}

  // Transform that maps world coordinates into the frame anchored at
  // (position, heading): the anchor maps to the origin with zero heading.
  static RigidTransform2D to_frame(const Vec2& position, double heading) {
    RigidTransform2D t(-heading, {});
    t.translation_ = t.rotate(position) * -1.0;
    return t;
  }

  double rotation() const { return rotation_; }
  const Vec2& translation() const { return translation_; }

  Vec2 apply(const Vec2& p) const { return rotate(p) + translation_; }
  Vec2 rotate(const Vec2& v) const {
    return {cos_ * v.x - sin_ * v.y, sin_ * v.x + cos_ * v.y};
  }
  double apply_heading(double heading) const { return wrap_angle(heading + rotation_); }

  RigidTransform2D inverse() const {
    RigidTransform2D inv(-rotation_, {});
    inv.translation_ = inv.rotate(translation_) * -1.0;
    return inv;
  }

  // this * other: apply `other` first, then `this`.
  RigidTransform2D compose(const RigidTransform2D& other) const {
    return {rotation_ + other.rotation_, rotate(other.translation_) + translation_};
  }

 private:
  double rotation_;  // rad
  Vec2 translation_;
  double cos_;
  double sin_;
};

}  // namespace scenaug
