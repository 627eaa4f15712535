#pragma once

#include <cmath>
#include <numbers>

namespace vib2move {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle) noexcept;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  [[nodiscard]] double norm() const noexcept { return std::hypot(x, y); }
  [[nodiscard]] constexpr double dot(Vec2 o) const noexcept { return x * o.x + y * o.y; }
  /// z-component of the planar cross product.
  [[nodiscard]] constexpr double cross(Vec2 o) const noexcept { return x * o.y - y * o.x; }
};

/// Rotates v counter-clockwise by angle.
Vec2 rotate(Vec2 v, double angle) noexcept;

/// Planar pose (x, y, theta). Theta is kept wrapped to (-pi, pi] by every
/// constructor and mutation, which is why the fields are not public.
class PoseSE2 {
 public:
  constexpr PoseSE2() = default;
  PoseSE2(double x, double y, double theta) noexcept : x_(x), y_(y), theta_(wrap_angle(theta)) {}
  PoseSE2(Vec2 p, double theta) noexcept : PoseSE2(p.x, p.y, theta) {}

  static constexpr PoseSE2 identity() noexcept { return {}; }

  [[nodiscard]] constexpr double x() const noexcept { return x_; }
  [[nodiscard]] constexpr double y() const noexcept { return y_; }
  [[nodiscard]] constexpr double theta() const noexcept { return theta_; }
  [[nodiscard]] constexpr Vec2 translation() const noexcept { return {x_, y_}; }

  /// Maps a point from this pose's local frame into the parent frame.
  [[nodiscard]] Vec2 transform_point(Vec2 local) const noexcept;
  /// Maps a point from the parent frame into this pose's local frame.
  [[nodiscard]] Vec2 inverse_transform_point(Vec2 parent) const noexcept;

  friend constexpr bool operator==(const PoseSE2&, const PoseSE2&) = default;

 private:
  double x_{0.0};
  double y_{0.0};
  double theta_{0.0};
};

/// Planar twist. Units are per unit of the integration parameter, not per
/// second: the quasi-static model has no intrinsic timescale.
struct TwistSE2 {
  double vx{0.0};
  double vy{0.0};
  double omega{0.0};

  friend constexpr bool operator==(const TwistSE2&, const TwistSE2&) = default;
};

/// Planar wrench [fx, fy, tau]. Torque is about the contact pressure center
/// unless a function says otherwise.
struct Wrench2D {
  double fx{0.0};
  double fy{0.0};
  double tau{0.0};

  friend constexpr bool operator==(const Wrench2D&, const Wrench2D&) = default;
};

PoseSE2 compose(const PoseSE2& a, const PoseSE2& b) noexcept;
PoseSE2 inverse(const PoseSE2& p) noexcept;

/// Finger pose expressed in the object frame: inverse(object) * finger.
PoseSE2 relative_pose(const PoseSE2& finger_w, const PoseSE2& object_w) noexcept;

/// Weighted twist norm ||(vx, vy, L * omega)||. L = 1 gives the plain
/// Euclidean norm used by the sliding update.
double twist_norm(const TwistSE2& t, double characteristic_length = 1.0) noexcept;
TwistSE2 normalized(const TwistSE2& t, double characteristic_length = 1.0);

/// Advances `pose` by `twist * ds`: an exact rotation of omega*ds about
/// `ref_point` (world frame), followed by a translation of (vx, vy)*ds.
/// Throws Error(kInvalidArgument) unless ds > 0.
PoseSE2 apply_twist(const PoseSE2& pose, const TwistSE2& twist, Vec2 ref_point, double ds);

}  // namespace vib2move
