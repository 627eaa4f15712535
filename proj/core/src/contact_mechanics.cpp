#include "vib2move/contact_mechanics.hpp"

#include <algorithm>
#include <string>

#include "vib2move/errors.hpp"

namespace vib2move {
namespace {

bool is_zero(const Wrench2D& w) noexcept {
  return w.fx == 0.0 && w.fy == 0.0 && w.tau == 0.0;
}

}  // namespace

void ContactPatch::validate() const {
  if (!(r0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contact patch radius must be positive, got " + std::to_string(r0));
  }
  if (!(c > 0.0 && c <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "torque constant c must lie in (0, 1], got " + std::to_string(c));
  }
  if (!(pressure_center_offset.norm() < r0)) {
    throw Error(ErrorCode::kInvalidArgument, "pressure center offset must lie inside the patch");
  }
}

Wrench2D LimitSurface::apply(const Wrench2D& w) const noexcept {
  return {w.fx / (a1 * a1), w.fy / (a2 * a2), w.tau / (a3 * a3)};
}

double LimitSurface::quadratic_form(const Wrench2D& w) const noexcept {
  const Wrench2D aw = apply(w);
  return w.fx * aw.fx + w.fy * aw.fy + w.tau * aw.tau;
}

void ObjectModel::validate() const {
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "object mass must be positive");
  }
  if (!(gravity > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gravity must be positive");
  }
  if (!(extents.x > 0.0 && extents.y > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "object extents must be positive");
  }
}

bool ObjectModel::footprint_contains(Vec2 p) const noexcept {
  return std::abs(p.x) <= 0.5 * extents.x && std::abs(p.y) <= 0.5 * extents.y;
}

double ObjectModel::max_length() const noexcept { return std::max(extents.x, extents.y); }

LimitSurface build_limit_surface(const ContactPatch& patch) {
  if (!(patch.r0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contact patch radius must be positive, got " + std::to_string(patch.r0));
  }
  if (!(patch.c > 0.0 && patch.c <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "torque constant c must lie in (0, 1], got " + std::to_string(patch.c));
  }
  // a1 = a2 = mu and a3 = r0 * c * mu, with mu * N normalized to 1.
  return {1.0, 1.0, patch.r0 * patch.c};
}

Wrench2D balance_wrench(const ObjectModel& obj, double x_c) noexcept {
  const double weight = obj.mass * obj.gravity;
  return {0.0, -weight, -weight * x_c};
}

TwistSE2 motion_direction(const LimitSurface& ls, const Wrench2D& w, double characteristic_length) {
  if (is_zero(w)) {
    throw Error(ErrorCode::kZeroWrench, "motion direction is undefined for a zero wrench");
  }
  const Wrench2D aw = ls.apply(w);
  return normalized({aw.fx, aw.fy, aw.tau}, characteristic_length);
}

double ls_scale(const LimitSurface& ls, const Wrench2D& w) {
  if (is_zero(w)) {
    throw Error(ErrorCode::kZeroWrench, "limit-surface scale is undefined for a zero wrench");
  }
  return 1.0 / ls.quadratic_form(w);
}

Vec2 pressure_center_world(const PoseSE2& finger_w, const ContactPatch& patch) noexcept {
  return finger_w.transform_point(patch.pressure_center_offset);
}

Vec2 com_world(const PoseSE2& object_w, const ObjectModel& obj) noexcept {
  return object_w.transform_point(obj.com_offset);
}

double lever_arm_x(const PoseSE2& finger_w, const PoseSE2& object_w, const ContactPatch& patch,
                   const ObjectModel& obj) noexcept {
  return com_world(object_w, obj).x - pressure_center_world(finger_w, patch).x;
}

}  // namespace vib2move
