#include "vib2move/slide_integrator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vib2move/errors.hpp"

namespace vib2move {

void PulseSpec::validate() const {
  if (!(step_ds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pulse step must be positive");
  }
  if (n_steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "pulse step count must be non-negative");
  }
}

std::string_view to_string(MotionClass m) noexcept {
  return m == MotionClass::kNearRotational ? "near_rotational" : "translational";
}

SlidingTwist sliding_twist(const ContactState& state, const ObjectModel& obj,
                           const IntegratorConfig& cfg) {
  SlidingTwist out;
  const LimitSurface ls = build_limit_surface(state.patch);
  out.pressure_center = pressure_center_world(state.finger_w, state.patch);
  out.x_c = com_world(state.object_w, obj).x - out.pressure_center.x;
  out.wrench = balance_wrench(obj, out.x_c);
  out.twist = motion_direction(ls, out.wrench, cfg.characteristic_length);
  out.k = ls_scale(ls, out.wrench);
  return out;
}

MotionClass classify_motion(const TwistSE2& t, const ContactPatch& patch, double threshold) {
  const double linear = std::hypot(t.vx, t.vy);
  const double angular = std::abs(t.omega) * patch.r0 * patch.c;
  if (linear == 0.0) {
    return angular > 0.0 ? MotionClass::kNearRotational : MotionClass::kTranslational;
  }
  return angular / linear > threshold ? MotionClass::kNearRotational
                                      : MotionClass::kTranslational;
}

ContactState slide_step(const ContactState& state, const ObjectModel& obj, double ds,
                        const IntegratorConfig& cfg) {
  if (!state.vibration_on) {
    throw Error(ErrorCode::kInvalidArgument, "slide_step requires vibration to be on");
  }
  const SlidingTwist st = sliding_twist(state, obj, cfg);
  if (!obj.footprint_contains(state.object_w.inverse_transform_point(st.pressure_center))) {
    throw Error(ErrorCode::kObjectDropped, "object dropped: pressure center left the footprint");
  }
  ContactState next = state;
  next.object_w = apply_twist(state.object_w, st.twist, st.pressure_center, ds * st.k);
  return next;
}

TrajectoryRecord make_record(std::size_t step, const ContactState& state, const ObjectModel& obj,
                             const IntegratorConfig& cfg) {
  const SlidingTwist st = sliding_twist(state, obj, cfg);
  return {step,  state.finger_w, state.object_w, st.twist,
          classify_motion(st.twist, state.patch, cfg.rotation_threshold), st.k};
}

PulseResult vibration_pulse(const ContactState& state, const ObjectModel& obj,
                            const PulseSpec& pulse, const IntegratorConfig& cfg) {
  pulse.validate();
  PulseResult out{state, {}};
  out.trajectory.push_back(make_record(0, state, obj, cfg));
  if (!state.vibration_on) {
    return out;
  }
  out.trajectory.reserve(static_cast<std::size_t>(pulse.n_steps) + 1);
  for (int i = 0; i < pulse.n_steps; ++i) {
    try {
      out.state = slide_step(out.state, obj, pulse.step_ds, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (step " + std::to_string(i) + ")");
    }
    out.trajectory.push_back(make_record(static_cast<std::size_t>(i) + 1, out.state, obj, cfg));
  }
  return out;
}

bool at_rest(const ContactState& state, const ObjectModel& obj, double tolerance) {
  const Vec2 pc = pressure_center_world(state.finger_w, state.patch);
  const Vec2 com = com_world(state.object_w, obj);
  return com.y < pc.y && std::abs(com.x - pc.x) < tolerance;
}

RolloutResult rollout_to_rest(const ContactState& state, const ObjectModel& obj, double ds,
                              std::size_t max_steps, const IntegratorConfig& cfg) {
  if (!state.vibration_on) {
    throw Error(ErrorCode::kInvalidArgument, "rollout_to_rest requires vibration to be on");
  }
  RolloutResult out{state, {}, false};
  out.trajectory.push_back(make_record(0, state, obj, cfg));
  for (std::size_t i = 0; i < max_steps; ++i) {
    if (at_rest(out.state, obj, cfg.rest_tolerance)) {
      out.converged = true;
      return out;
    }
    out.state = slide_step(out.state, obj, ds, cfg);
    out.trajectory.push_back(make_record(i + 1, out.state, obj, cfg));
  }
  out.converged = at_rest(out.state, obj, cfg.rest_tolerance);
  return out;
}

}  // namespace vib2move
