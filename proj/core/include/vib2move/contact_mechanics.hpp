#pragma once

#include "vib2move/se2.hpp"

namespace vib2move {

inline constexpr double kStandardGravity = 9.81;
/// Torque constant of a uniformly loaded disk-equivalent patch.
inline constexpr double kUniformPressureTorqueConstant = 0.6;

/// Finger contact patch. `pressure_center_offset` is expressed in the finger
/// frame, relative to the geometric patch center (the finger pose origin).
struct ContactPatch {
  double r0{0.015};
  double c{kUniformPressureTorqueConstant};
  Vec2 pressure_center_offset{};

  /// Throws Error(kInvalidArgument) if r0 <= 0, c not in (0, 1], or the
  /// pressure center lies outside the patch radius.
  void validate() const;

  friend bool operator==(const ContactPatch&, const ContactPatch&) = default;
};

/// Diagonal ellipsoidal limit surface w^T A w = 1 with
/// A = diag(a1^-2, a2^-2, a3^-2). The friction magnitude (mu * N) is
/// normalized to one; wrench balance picks the actual size through ls_scale.
struct LimitSurface {
  double a1{1.0};
  double a2{1.0};
  double a3{1.0};

  /// A * w.
  [[nodiscard]] Wrench2D apply(const Wrench2D& w) const noexcept;
  /// w^T A w.
  [[nodiscard]] double quadratic_form(const Wrench2D& w) const noexcept;
};

struct ObjectModel {
  double mass{0.09};
  /// Footprint (width along object x, height along object y), centered on
  /// the object frame origin.
  Vec2 extents{0.09, 0.15};
  /// Center of mass in the object frame.
  Vec2 com_offset{};
  double gravity{kStandardGravity};

  void validate() const;
  /// True if the object-frame point lies inside the rectangular footprint.
  [[nodiscard]] bool footprint_contains(Vec2 object_point) const noexcept;
  [[nodiscard]] double max_length() const noexcept;

  friend bool operator==(const ObjectModel&, const ObjectModel&) = default;
};

LimitSurface build_limit_surface(const ContactPatch& patch);

/// Gravity-balancing wrench about the pressure center, where x_c is the
/// world-frame horizontal offset com.x - pressure_center.x. Depends only on
/// mass, gravity and geometry: no friction coefficient or grasp force.
Wrench2D balance_wrench(const ObjectModel& obj, double x_c) noexcept;

/// Unit twist (per the weighted norm) parallel to A * w: the object's motion
/// relative to the fixed finger while slipping, expressed at the pressure
/// center. Throws Error(kZeroWrench) for w == 0.
TwistSE2 motion_direction(const LimitSurface& ls, const Wrench2D& w,
                          double characteristic_length = 1.0);

/// k = 1 / (w^T A w), the step scale selected by wrench balance.
/// Throws Error(kZeroWrench) for w == 0.
double ls_scale(const LimitSurface& ls, const Wrench2D& w);

Vec2 pressure_center_world(const PoseSE2& finger_w, const ContactPatch& patch) noexcept;
Vec2 com_world(const PoseSE2& object_w, const ObjectModel& obj) noexcept;

/// com.x - pressure_center.x in the world frame.
double lever_arm_x(const PoseSE2& finger_w, const PoseSE2& object_w,
                   const ContactPatch& patch, const ObjectModel& obj) noexcept;

}  // namespace vib2move
