#include "vib2move/se2.hpp"

#include <string>

#include "vib2move/errors.hpp"

namespace vib2move {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroWrench: return "ZeroWrench";
    case ErrorCode::kObjectDropped: return "ObjectDropped";
    case ErrorCode::kStageTimeout: return "StageTimeout";
    case ErrorCode::kOrientationLimit: return "OrientationLimit";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

double wrap_angle(double angle) noexcept {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Vec2 rotate(Vec2 v, double angle) noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 PoseSE2::transform_point(Vec2 local) const noexcept {
  return translation() + rotate(local, theta_);
}

Vec2 PoseSE2::inverse_transform_point(Vec2 parent) const noexcept {
  return rotate(parent - translation(), -theta_);
}

PoseSE2 compose(const PoseSE2& a, const PoseSE2& b) noexcept {
  return {a.transform_point(b.translation()), a.theta() + b.theta()};
}

PoseSE2 inverse(const PoseSE2& p) noexcept {
  return {-rotate(p.translation(), -p.theta()), -p.theta()};
}

PoseSE2 relative_pose(const PoseSE2& finger_w, const PoseSE2& object_w) noexcept {
  return compose(inverse(object_w), finger_w);
}

double twist_norm(const TwistSE2& t, double characteristic_length) noexcept {
  return std::sqrt(t.vx * t.vx + t.vy * t.vy +
                   characteristic_length * characteristic_length * t.omega * t.omega);
}

TwistSE2 normalized(const TwistSE2& t, double characteristic_length) {
  const double n = twist_norm(t, characteristic_length);
  if (!(n > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero twist");
  }
  return {t.vx / n, t.vy / n, t.omega / n};
}

PoseSE2 apply_twist(const PoseSE2& pose, const TwistSE2& twist, Vec2 ref_point, double ds) {
  if (!(ds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "apply_twist: step must be positive, got " + std::to_string(ds));
  }
  const double dtheta = twist.omega * ds;
  const Vec2 rotated = ref_point + rotate(pose.translation() - ref_point, dtheta);
  const Vec2 moved = rotated + Vec2{twist.vx * ds, twist.vy * ds};
  return {moved, pose.theta() + dtheta};
}

}  // namespace vib2move
