#include <cmath>
#include <random>
#include <type_traits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vib2move/contact_mechanics.hpp"
#include "vib2move/errors.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {
namespace {

using testing::balanced_quadratic_form;
using testing::max_dissipation_oracle;
using testing::sphere_angle;
using testing::sphere_resolution;

ContactPatch patch(double r0, double c) { return {r0, c, {}}; }

TEST(LimitSurface, PaperPatchGivesNineMillimeterTorqueAxis) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  EXPECT_EQ(ls.a1, 1.0);
  EXPECT_EQ(ls.a2, 1.0);
  EXPECT_NEAR(ls.a3, 0.009, 1e-15);
}

TEST(LimitSurface, UnitParametersGiveSphere) {
  const LimitSurface ls = build_limit_surface(patch(1.0, 1.0));
  EXPECT_EQ(ls.a3, 1.0);
}

TEST(LimitSurface, TorqueAxisIsProduct) {
  EXPECT_NEAR(build_limit_surface(patch(0.02, 0.5)).a3, 0.010, 1e-15);
}

TEST(LimitSurface, RejectsBadPatch) {
  EXPECT_THROW(build_limit_surface(patch(0.0, 0.6)), Error);
  EXPECT_THROW(build_limit_surface(patch(-0.01, 0.6)), Error);
  EXPECT_THROW(build_limit_surface(patch(0.015, 0.0)), Error);
  EXPECT_THROW(build_limit_surface(patch(0.015, 1.5)), Error);
  // The offset does not enter the limit surface, but the patch itself is invalid.
  const ContactPatch off_patch{0.015, 0.6, {0.02, 0.0}};
  EXPECT_NO_THROW(build_limit_surface(off_patch));
  EXPECT_THROW(off_patch.validate(), Error);
}

TEST(BalanceWrench, ZeroLeverArm) {
  const Wrench2D w = balance_wrench({0.09, {0.09, 0.15}, {}, 9.81}, 0.0);
  EXPECT_EQ(w.fx, 0.0);
  EXPECT_NEAR(w.fy, -0.8829, 1e-12);
  EXPECT_EQ(w.tau, 0.0);
}

TEST(BalanceWrench, PositiveLeverArm) {
  const Wrench2D w = balance_wrench({0.09, {0.09, 0.15}, {}, 9.81}, 0.02);
  EXPECT_NEAR(w.fy, -0.8829, 1e-12);
  EXPECT_NEAR(w.tau, -0.017658, 1e-12);
}

TEST(BalanceWrench, TorqueSignFollowsLeverArm) {
  const Wrench2D w = balance_wrench({0.053, {0.05, 0.16}, {}, 9.81}, -0.03);
  EXPECT_NEAR(w.fy, -0.51993, 1e-12);
  EXPECT_NEAR(w.tau, 0.0155979, 1e-12);
}

TEST(BalanceWrench, TakesNoFrictionOrGripForce) {
  // Only the object and the lever arm enter the balance.
  static_assert(std::is_invocable_r_v<Wrench2D, decltype(&balance_wrench), const ObjectModel&,
                                      double>);
  static_assert(!std::is_invocable_v<decltype(&balance_wrench), const ObjectModel&, double,
                                     double>);
}

TEST(MotionDirection, CentredLoadGivesStraightDownTranslation) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const TwistSE2 t = motion_direction(ls, {0.0, -0.8829, 0.0});
  EXPECT_EQ(t.vx, 0.0);
  EXPECT_EQ(t.vy, -1.0);
  EXPECT_EQ(t.omega, 0.0);
}

TEST(MotionDirection, OffsetLoadIsNearlyPureRotation) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const TwistSE2 t = motion_direction(ls, {0.0, -0.8829, -0.017658});
  // A * w = (0, -0.8829, -0.017658 / 0.009^2) = (0, -0.8829, -218.0)
  const double wz = -0.017658 / (0.009 * 0.009);
  const double n = std::hypot(0.8829, wz);
  EXPECT_NEAR(t.vy, -0.8829 / n, 1e-12);
  EXPECT_NEAR(t.omega, wz / n, 1e-12);
  EXPECT_LT(t.omega, 0.0);
  EXPECT_NEAR(t.omega / t.vy, 246.9136, 1e-3);
}

TEST(MotionDirection, RejectsZeroWrench) {
  EXPECT_THROW(motion_direction(LimitSurface{}, {}), Error);
  try {
    motion_direction(LimitSurface{}, {});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroWrench);
  }
}

TEST(MotionDirection, RotationSignOpposesLeverArm) {
  const ObjectModel obj;
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  for (double x_c : {-0.05, -0.01, -1e-6, 1e-6, 0.003, 0.04}) {
    const TwistSE2 t = motion_direction(ls, balance_wrench(obj, x_c));
    EXPECT_EQ(std::signbit(t.omega), !std::signbit(x_c)) << x_c;
  }
}

TEST(MotionDirection, ParallelToScaledWrench) {
  Rng rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const LimitSurface ls = build_limit_surface(patch(0.01 + 0.01 * std::abs(d(rng)), 0.6));
    const ObjectModel obj{0.03 + 0.1 * std::abs(d(rng)), {0.09, 0.15}, {}, 9.81};
    const Wrench2D w = balance_wrench(obj, 0.05 * d(rng));
    const Wrench2D aw = ls.apply(w);
    const TwistSE2 t = motion_direction(ls, w);
    const double cosine = (t.vx * aw.fx + t.vy * aw.fy + t.omega * aw.tau) /
                          (twist_norm(t) * std::sqrt(aw.fx * aw.fx + aw.fy * aw.fy + aw.tau * aw.tau));
    EXPECT_GE(cosine, 1.0 - 1e-12);
    EXPECT_NEAR(twist_norm(t), 1.0, 1e-12);
  }
}

TEST(LsScale, UnitWrenchOnUnitSurface) {
  EXPECT_DOUBLE_EQ(ls_scale(LimitSurface{}, {0.0, -1.0, 0.0}), 1.0);
}

TEST(LsScale, HandEvaluatedExample) {
  const ObjectModel obj{0.09, {0.09, 0.15}, {}, 9.81};
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const Wrench2D w = balance_wrench(obj, 0.02);
  EXPECT_NEAR(ls.quadratic_form(w), 4.62896, 5e-6);
  EXPECT_NEAR(ls_scale(ls, w), 0.216031, 5e-7);
  EXPECT_NEAR(ls.quadratic_form(w), balanced_quadratic_form(0.09, 9.81, 0.02, 0.009), 1e-12);
}

TEST(LsScale, DoublingMassQuartersScale) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  ObjectModel obj{0.07, {0.09, 0.15}, {}, 9.81};
  const double k1 = ls_scale(ls, balance_wrench(obj, 0.013));
  obj.mass *= 2.0;
  const double k2 = ls_scale(ls, balance_wrench(obj, 0.013));
  EXPECT_NEAR(k2, k1 / 4.0, 1e-12 * k1);
}

TEST(LsScale, RejectsZeroWrench) { EXPECT_THROW(ls_scale(LimitSurface{}, {}), Error); }

TEST(LsScale, ScaledSurfacePassesThroughBalancedWrench) {
  Rng rng(8);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const LimitSurface ls = build_limit_surface(patch(0.005 + 0.02 * std::abs(d(rng)), 0.6));
    const ObjectModel obj{0.02 + 0.2 * std::abs(d(rng)), {0.09, 0.15}, {}, 9.81};
    const Wrench2D w = balance_wrench(obj, 0.08 * d(rng));
    EXPECT_NEAR(ls_scale(ls, w) * ls.quadratic_form(w), 1.0, 1e-12);
  }
}

TEST(RotationalFraction, IncreasesWithLeverArm) {
  const ContactPatch p = patch(0.015, 0.6);
  const LimitSurface ls = build_limit_surface(p);
  const ObjectModel obj;
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double x_c = 5.0 * p.r0 * i / 200.0;
    const TwistSE2 t = motion_direction(ls, balance_wrench(obj, x_c));
    const double fraction = std::abs(t.omega) * p.r0 * p.c / std::hypot(t.vx, t.vy);
    EXPECT_GT(fraction, prev) << x_c;
    prev = fraction;
  }
}

TEST(DissipationOracle, AxisAlignedTranslation) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const Wrench2D w = max_dissipation_oracle(ls, {0.0, -1.0, 0.0}, 4000);
  EXPECT_LT(sphere_angle(ls, w, {0.0, -1.0, 0.0}), 2.0 * sphere_resolution(4000));
}

TEST(DissipationOracle, PureTorque) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const Wrench2D w = max_dissipation_oracle(ls, {0.0, 0.0, 1.0}, 4000);
  EXPECT_LT(sphere_angle(ls, w, {0.0, 0.0, ls.a3}), 2.0 * sphere_resolution(4000));
  EXPECT_NEAR(w.tau, ls.a3, 1e-3 * ls.a3);
}

TEST(DissipationOracle, RecoversWrenchFromItsMotion) {
  const LimitSurface ls = build_limit_surface(patch(0.015, 0.6));
  const Wrench2D w0{0.0, -0.8829, -0.004};
  const Wrench2D w = max_dissipation_oracle(ls, motion_direction(ls, w0), 10000);
  EXPECT_LT(sphere_angle(ls, w, w0), 2.0 * sphere_resolution(10000));
}

TEST(WorldGeometry, PressureCenterAndLeverArm) {
  const ContactPatch p{0.015, 0.6, {0.002, 0.0}};
  const PoseSE2 finger{0.0, 0.0, kPi / 2.0};
  const Vec2 pc = pressure_center_world(finger, p);
  EXPECT_NEAR(pc.x, 0.0, 1e-15);
  EXPECT_NEAR(pc.y, 0.002, 1e-15);
  const ObjectModel obj{0.09, {0.09, 0.15}, {0.01, 0.0}, 9.81};
  const PoseSE2 object{0.03, -0.04, 0.0};
  EXPECT_NEAR(lever_arm_x(finger, object, p, obj), 0.04, 1e-15);
}

}  // namespace
}  // namespace vib2move
