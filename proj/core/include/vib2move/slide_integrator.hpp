#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vib2move/contact_mechanics.hpp"
#include "vib2move/se2.hpp"

namespace vib2move {

/// The simulated plant: finger and object poses in the world frame, the
/// finger's contact patch, and whether the fingertips are vibrating.
struct ContactState {
  PoseSE2 finger_w;
  PoseSE2 object_w;
  ContactPatch patch;
  bool vibration_on{false};

  [[nodiscard]] PoseSE2 relative() const noexcept { return relative_pose(finger_w, object_w); }
};

/// One vibration pulse: n_steps sliding updates of arc length step_ds each.
struct PulseSpec {
  double step_ds{1e-3};
  int n_steps{1};

  void validate() const;
};

enum class MotionClass { kTranslational, kNearRotational };

std::string_view to_string(MotionClass m) noexcept;

struct IntegratorConfig {
  /// L in the twist norm ||(vx, vy, L * omega)||.
  double characteristic_length{1.0};
  /// Classification threshold on |omega| * r0 * c / ||v||.
  double rotation_threshold{0.5};
  /// |x_c| below which the object is considered aligned with gravity.
  double rest_tolerance{1e-5};

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// The model quantities driving one sliding update at a given state.
struct SlidingTwist {
  double x_c{0.0};
  Wrench2D wrench;
  TwistSE2 twist;  // unit twist, relative to the fixed finger, at the pressure center
  double k{0.0};
  Vec2 pressure_center;
};

SlidingTwist sliding_twist(const ContactState& state, const ObjectModel& obj,
                           const IntegratorConfig& cfg = {});

MotionClass classify_motion(const TwistSE2& unit_twist, const ContactPatch& patch,
                            double threshold = IntegratorConfig{}.rotation_threshold);

/// One modified motion update: the object advances by the unit sliding twist
/// scaled by ds * k about the pressure center. The finger never moves.
/// Throws kInvalidArgument if vibration is off, kObjectDropped if the
/// pressure center is outside the object's footprint.
ContactState slide_step(const ContactState& state, const ObjectModel& obj, double ds,
                        const IntegratorConfig& cfg = {});

struct TrajectoryRecord {
  std::size_t step{0};
  PoseSE2 finger_w;
  PoseSE2 object_w;
  TwistSE2 twist;
  MotionClass motion{MotionClass::kTranslational};
  double k{0.0};
};

using Trajectory = std::vector<TrajectoryRecord>;

TrajectoryRecord make_record(std::size_t step, const ContactState& state, const ObjectModel& obj,
                             const IntegratorConfig& cfg = {});

struct PulseResult {
  ContactState state;
  Trajectory trajectory;
};

/// With vibration on, applies `pulse.n_steps` slide steps and records the
/// initial state plus every intermediate pose. With vibration off the
/// contact sticks and the state is returned unchanged.
PulseResult vibration_pulse(const ContactState& state, const ObjectModel& obj,
                            const PulseSpec& pulse, const IntegratorConfig& cfg = {});

struct RolloutResult {
  ContactState state;
  Trajectory trajectory;
  bool converged{false};
};

/// Slides until the CoM hangs below the pressure center with
/// |x_c| < cfg.rest_tolerance, or until max_steps. Alignment with the CoM
/// above the contact is an unstable equilibrium and does not count as rest.
RolloutResult rollout_to_rest(const ContactState& state, const ObjectModel& obj, double ds,
                              std::size_t max_steps, const IntegratorConfig& cfg = {});

/// True when the CoM hangs below the pressure center and |x_c| < tolerance.
bool at_rest(const ContactState& state, const ObjectModel& obj, double tolerance);

}  // namespace vib2move
