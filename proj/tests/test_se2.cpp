#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vib2move/errors.hpp"
#include "vib2move/se2.hpp"
#include "vib2move/sim_env.hpp"

namespace vib2move {
namespace {

void expect_pose_near(const PoseSE2& a, const PoseSE2& b, double tol) {
  EXPECT_NEAR(a.x(), b.x(), tol);
  EXPECT_NEAR(a.y(), b.y(), tol);
  EXPECT_NEAR(wrap_angle(a.theta() - b.theta()), 0.0, tol);
}

PoseSE2 random_pose(Rng& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return {d(rng), d(rng), kPi * d(rng)};
}

TEST(WrapAngle, StaysInHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(wrap_angle(0.25), 0.25);
  Rng rng(3);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_angle(d(rng));
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
  }
}

TEST(Compose, IdentityIsNeutral) {
  const PoseSE2 p{0.3, -0.2, 1.1};
  EXPECT_EQ(compose(PoseSE2::identity(), p), p);
}

TEST(Compose, RotatesTheSecondTranslation) {
  expect_pose_near(compose({1.0, 0.0, kPi / 2.0}, {1.0, 0.0, 0.0}), {1.0, 1.0, kPi / 2.0}, 1e-15);
}

TEST(Compose, InverseGivesIdentity) {
  const PoseSE2 p{0.4, -1.3, 2.9};
  expect_pose_near(compose(p, inverse(p)), PoseSE2::identity(), 1e-12);
}

TEST(Compose, GroupAxiomsOnRandomPoses) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const PoseSE2 a = random_pose(rng);
    const PoseSE2 b = random_pose(rng);
    const PoseSE2 c = random_pose(rng);
    expect_pose_near(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-12);
    expect_pose_near(compose(a, inverse(a)), PoseSE2::identity(), 1e-12);
    expect_pose_near(compose(inverse(a), a), PoseSE2::identity(), 1e-12);
    expect_pose_near(compose(a, PoseSE2::identity()), a, 1e-12);
  }
}

TEST(RelativePose, CoincidentFramesGiveIdentity) {
  const PoseSE2 p{0.1, 0.2, 0.3};
  expect_pose_near(relative_pose(p, p), PoseSE2::identity(), 1e-15);
}

TEST(RelativePose, ObjectAtOrigin) {
  expect_pose_near(relative_pose({0.01, 0.02, 0.1}, PoseSE2::identity()), {0.01, 0.02, 0.1}, 1e-15);
}

TEST(RelativePose, RotatedObjectFrame) {
  // The finger sits 5 cm along world y; in an object frame turned by 90 deg
  // that direction is the object's +x axis.
  expect_pose_near(relative_pose({0.0, 0.05, kPi / 2.0}, {0.0, 0.0, kPi / 2.0}), {0.05, 0.0, 0.0},
                   1e-15);
}

TEST(ApplyTwist, ZeroTwistLeavesPose) {
  const PoseSE2 p{0.02, 0.0, 0.0};
  EXPECT_EQ(apply_twist(p, {}, {0.0, 0.0}, 0.5), p);
}

TEST(ApplyTwist, QuarterTurnAboutOrigin) {
  expect_pose_near(apply_twist({0.02, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0}, kPi / 2.0),
                   {0.0, 0.02, kPi / 2.0}, 1e-15);
}

TEST(ApplyTwist, RotationAboutPointThenTranslation) {
  // Hand evaluation: rotate (0.02, 0) by 0.005 rad about the origin, then
  // move by (0, -1) * 0.01.
  const double a = 0.005;
  const PoseSE2 expected{0.02 * std::cos(a), 0.02 * std::sin(a) - 0.01, a};
  expect_pose_near(apply_twist({0.02, 0.0, 0.0}, {0.0, -1.0, 0.5}, {0.0, 0.0}, 0.01), expected,
                   1e-15);
}

TEST(ApplyTwist, RejectsNonPositiveStep) {
  EXPECT_THROW(apply_twist({}, {1.0, 0.0, 0.0}, {}, 0.0), Error);
  EXPECT_THROW(apply_twist({}, {1.0, 0.0, 0.0}, {}, -1e-3), Error);
}

TEST(ApplyTwist, PureRotationPreservesDistanceToReference) {
  Rng rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const PoseSE2 p = random_pose(rng);
    const Vec2 ref{d(rng), d(rng)};
    const PoseSE2 q = apply_twist(p, {0.0, 0.0, d(rng)}, ref, std::abs(d(rng)) + 1e-3);
    EXPECT_NEAR((q.translation() - ref).norm(), (p.translation() - ref).norm(), 1e-12);
  }
}

TEST(ApplyTwist, SubdividedStepsConvergeAtSecondOrderPerStep) {
  // One step of size h versus two of size h/2: the gap is O(h^2), so
  // halving h should quarter it.
  const PoseSE2 p{0.02, -0.01, 0.3};
  const TwistSE2 t{0.3, -0.8, 2.0};
  const Vec2 ref{0.01, 0.0};
  auto gap = [&](double h) {
    const PoseSE2 one = apply_twist(p, t, ref, h);
    const PoseSE2 two = apply_twist(apply_twist(p, t, ref, h / 2.0), t, ref, h / 2.0);
    return std::hypot(one.x() - two.x(), one.y() - two.y());
  };
  double prev = gap(0.08);
  for (double h : {0.04, 0.02, 0.01}) {
    const double g = gap(h);
    EXPECT_NEAR(std::log2(prev / g), 2.0, 0.1) << "h = " << h;
    prev = g;
  }
}

TEST(ApplyTwist, CommutingCaseIsExactUnderSubdivision) {
  const PoseSE2 p{0.1, 0.2, -0.4};
  const TwistSE2 t{0.0, 0.0, 1.7};
  PoseSE2 q = p;
  for (int i = 0; i < 8; ++i) q = apply_twist(q, t, {0.0, 0.0}, 0.1 / 8.0);
  expect_pose_near(q, apply_twist(p, t, {0.0, 0.0}, 0.1), 1e-14);
}

TEST(TwistNorm, WeightedNorm) {
  EXPECT_DOUBLE_EQ(twist_norm({3.0, 4.0, 0.0}), 5.0);
  EXPECT_DOUBLE_EQ(twist_norm({0.0, 0.0, 2.0}, 0.5), 1.0);
  const TwistSE2 u = normalized({1.0, -2.0, 30.0}, 0.015);
  EXPECT_NEAR(twist_norm(u, 0.015), 1.0, 1e-12);
  EXPECT_THROW(normalized({}), Error);
}

}  // namespace
}  // namespace vib2move
