#include <cmath>
#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vib2move/errors.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {
namespace {

using testing::com_height;
using testing::random_contact;

const ObjectModel kObject{0.09, {0.09, 0.15}, {}, 9.81};
const ContactPatch kPatch{0.015, 0.6, {}};

// Finger at the world origin pointing along +x; the object hangs from it with
// the CoM `x_c` to the right and `depth` below the pressure center.
ContactState hanging(double x_c, double depth, bool vibrating = true) {
  ContactState s;
  s.finger_w = PoseSE2::identity();
  s.object_w = PoseSE2{x_c, -depth, 0.0};
  s.patch = kPatch;
  s.vibration_on = vibrating;
  return s;
}

TEST(SlideStep, CentredHangingObjectTranslatesStraightDown) {
  const ContactState s = hanging(0.0, 0.03);
  const double ds = 1e-3;
  const ContactState next = slide_step(s, kObject, ds);
  const double k = 1.0 / (0.8829 * 0.8829);
  EXPECT_DOUBLE_EQ(next.object_w.x(), 0.0);
  EXPECT_NEAR(next.object_w.y(), -0.03 - ds * k, 1e-15);
  EXPECT_EQ(next.object_w.theta(), 0.0);
  EXPECT_EQ(next.finger_w, s.finger_w);
}

TEST(SlideStep, OffsetLoadRotatesFarMoreThanItTranslates) {
  const ContactState s = hanging(0.02, 0.03);
  const SlidingTwist st = sliding_twist(s, kObject);
  EXPECT_NEAR(st.x_c, 0.02, 1e-15);
  EXPECT_LT(st.twist.omega, 0.0);
  // Rotation per unit of pressure-center travel, from A * w.
  EXPECT_NEAR(std::abs(st.twist.omega) / std::hypot(st.twist.vx, st.twist.vy), 246.9136, 1e-3);
  const ContactState next = slide_step(s, kObject, 1e-3);
  EXPECT_LT(next.object_w.theta(), 0.0);
}

TEST(SlideStep, RequiresVibration) {
  EXPECT_THROW(slide_step(hanging(0.0, 0.03, false), kObject, 1e-3), Error);
}

TEST(SlideStep, ReportsDropWhenContactLeavesFootprint) {
  ContactState s = hanging(0.0, 0.1);  // pressure center 10 cm above the CoM
  try {
    slide_step(s, kObject, 1e-3);
    FAIL() << "expected a drop";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kObjectDropped);
  }
}

TEST(SlideStep, NeverMovesTheFinger) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto rc = random_contact(rng);
    EXPECT_EQ(slide_step(rc.state, rc.object, 1e-3).finger_w, rc.state.finger_w);
  }
}

TEST(SlideStep, LowersTheCentreOfMass) {
  Rng rng(99);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto rc = random_contact(rng);
    const ContactState next = slide_step(rc.state, rc.object, 1e-3);
    if (!(com_height(next, rc.object) < com_height(rc.state, rc.object))) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(SlideStep, RelativeMotionIsTranslationInvariant) {
  Rng rng(17);
  const PoseSE2 offset{0.37, -0.21, 0.0};
  const PulseSpec pulse{1e-3, 20};
  // Returns the end pose, or nullopt if the object dropped on the way.
  auto end_relative = [&](const ContactState& s, const ObjectModel& obj) -> std::optional<PoseSE2> {
    try {
      return vibration_pulse(s, obj, pulse).state.relative();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kObjectDropped);
      return std::nullopt;
    }
  };
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const auto rc = random_contact(rng);
    ContactState shifted = rc.state;
    shifted.finger_w = compose(offset, shifted.finger_w);
    shifted.object_w = compose(offset, shifted.object_w);
    const auto a = end_relative(rc.state, rc.object);
    const auto b = end_relative(shifted, rc.object);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (!a) continue;
    ++compared;
    EXPECT_NEAR(a->x(), b->x(), 1e-12);
    EXPECT_NEAR(a->y(), b->y(), 1e-12);
    EXPECT_NEAR(wrap_angle(a->theta() - b->theta()), 0.0, 1e-12);
  }
  EXPECT_GT(compared, 150);
}

TEST(VibrationPulse, StickingWhenVibrationIsOff) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    auto rc = random_contact(rng);
    rc.state.vibration_on = false;
    ContactState s = rc.state;
    for (int p = 0; p < 5; ++p) s = vibration_pulse(s, rc.object, {1e-3, 50}).state;
    EXPECT_EQ(s.relative(), rc.state.relative());
    EXPECT_EQ(s.object_w, rc.state.object_w);
  }
  const PulseResult r = vibration_pulse(hanging(0.01, 0.03, false), kObject, {1e-3, 10});
  EXPECT_EQ(r.trajectory.size(), 1u);
}

TEST(VibrationPulse, SingleStepMatchesSlideStep) {
  const ContactState s = hanging(0.013, 0.02);
  const PulseResult r = vibration_pulse(s, kObject, {2e-3, 1});
  EXPECT_EQ(r.state.object_w, slide_step(s, kObject, 2e-3).object_w);
  ASSERT_EQ(r.trajectory.size(), 2u);
  EXPECT_EQ(r.trajectory[0].object_w, s.object_w);
  EXPECT_EQ(r.trajectory[1].object_w, r.state.object_w);
}

TEST(VibrationPulse, ValidatesPulse) {
  EXPECT_THROW(vibration_pulse(hanging(0.0, 0.03), kObject, {0.0, 5}), Error);
  EXPECT_THROW(vibration_pulse(hanging(0.0, 0.03), kObject, {1e-3, -1}), Error);
}

TEST(VibrationPulse, SwingsUnderThenSlides) {
  // CoM to the side of and slightly below the contact: the object first
  // swings under the finger, then slides along gravity.
  ContactState s;
  s.finger_w = PoseSE2::identity();
  s.object_w = compose(s.finger_w, inverse(PoseSE2{0.02, 0.0, 0.0}));
  s.patch = kPatch;
  s.vibration_on = true;
  const PulseResult r = vibration_pulse(s, kObject, {1e-3, 3700});
  ASSERT_EQ(r.trajectory.size(), 3701u);
  EXPECT_EQ(r.trajectory.front().motion, MotionClass::kNearRotational);
  EXPECT_EQ(r.trajectory.back().motion, MotionClass::kTranslational);
  // One switch only: a rotational prefix followed by a translational suffix.
  int switches = 0;
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    switches += r.trajectory[i].motion != r.trajectory[i - 1].motion;
  }
  EXPECT_EQ(switches, 1);
}

TEST(ClassifyMotion, Examples) {
  EXPECT_EQ(classify_motion({0.0, -1.0, 0.0}, kPatch), MotionClass::kTranslational);
  EXPECT_EQ(classify_motion({0.0, 0.0, 1.0}, kPatch), MotionClass::kNearRotational);
  EXPECT_EQ(classify_motion({0.0, 0.0, -1.0}, kPatch), MotionClass::kNearRotational);
  const SlidingTwist st = sliding_twist(hanging(0.02, 0.03), kObject);
  const double ratio = std::abs(st.twist.omega) * 0.009 / std::hypot(st.twist.vx, st.twist.vy);
  EXPECT_NEAR(ratio, 2.222, 1e-3);
  EXPECT_EQ(classify_motion(st.twist, kPatch), MotionClass::kNearRotational);
}

TEST(RolloutToRest, AlignedStartStopsImmediately) {
  const RolloutResult r = rollout_to_rest(hanging(0.0, 0.03), kObject, 1e-3, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.trajectory.size(), 1u);
}

TEST(RolloutToRest, OffsetStartConvergesMonotonically) {
  // Small steps keep the sampled |x_c| free of overshoot near alignment.
  const RolloutResult r = rollout_to_rest(hanging(0.03, 0.03), kObject, 1e-4, 200000);
  ASSERT_TRUE(r.converged);
  double prev = 1.0;
  for (const auto& rec : r.trajectory) {
    const double x_c = std::abs(com_world(rec.object_w, kObject).x);
    EXPECT_LE(x_c, prev);
    prev = x_c;
  }
  const SlidingTwist end = sliding_twist(r.state, kObject);
  EXPECT_LT(std::abs(end.x_c), 1e-5);
  EXPECT_EQ(classify_motion(end.twist, kPatch), MotionClass::kTranslational);
}

TEST(RolloutToRest, CoMAboveContactMovesAwayFromAlignment) {
  // CoM 3 cm above the contact and 1 um to the side. The object slides down
  // while the lever arm grows; stop well before the CoM passes the contact.
  for (double x0 : {1e-6, -1e-6}) {
    const RolloutResult r = rollout_to_rest(hanging(x0, -0.03), kObject, 1e-4, 100);
    EXPECT_FALSE(r.converged);
    double prev = std::abs(x0);
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
      ContactState s = r.state;
      s.object_w = r.trajectory[i].object_w;
      const SlidingTwist st = sliding_twist(s, kObject);
      EXPECT_GT(std::abs(st.x_c), prev);
      EXPECT_EQ(std::signbit(st.x_c), std::signbit(x0));
      prev = std::abs(st.x_c);
    }
  }
}

TEST(RolloutToRest, RequiresVibration) {
  EXPECT_THROW(rollout_to_rest(hanging(0.0, 0.03, false), kObject, 1e-3, 10), Error);
}

TEST(Integrator, FirstOrderUnderStepHalving) {
  // Endpoint over a fixed arc with ds, ds/2, ds/4, ds/8: successive gaps
  // should halve.
  const ContactState s = hanging(0.012, 0.025);
  const double arc = 0.05;
  auto endpoint = [&](double ds) {
    return vibration_pulse(s, kObject, {ds, static_cast<int>(std::lround(arc / ds))}).state.object_w;
  };
  auto gap = [](const PoseSE2& a, const PoseSE2& b) {
    return std::hypot(a.x() - b.x(), a.y() - b.y());
  };
  const PoseSE2 e1 = endpoint(1e-3);
  const PoseSE2 e2 = endpoint(5e-4);
  const PoseSE2 e3 = endpoint(2.5e-4);
  const PoseSE2 e4 = endpoint(1.25e-4);
  const double p1 = std::log2(gap(e1, e2) / gap(e2, e3));
  const double p2 = std::log2(gap(e2, e3) / gap(e3, e4));
  EXPECT_GE(p1, 0.9);
  EXPECT_GE(p2, 0.9);
  EXPECT_LE(p2, 1.2);
}

}  // namespace
}  // namespace vib2move
