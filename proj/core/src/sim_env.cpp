#include "vib2move/sim_env.hpp"

#include <algorithm>
#include <string>

#include "vib2move/errors.hpp"

namespace vib2move {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

void NoiseModel::validate() const {
  if (!(pos_sigma >= 0.0 && angle_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigmas must be non-negative");
  }
}

void PerturbationModel::validate() const {
  if (!(pressure_bias_sigma >= 0.0 && radius_jitter_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation sigmas must be non-negative");
  }
}

ContactPatch PerturbationModel::sample(const ContactPatch& nominal, Rng& rng) const {
  ContactPatch out = nominal;
  std::normal_distribution<double> unit(0.0, 1.0);
  // Draw all three variates unconditionally so the stream layout does not
  // depend on which sigmas are zero.
  const double bx = unit(rng);
  const double by = unit(rng);
  const double dr = unit(rng);
  out.r0 = std::max(nominal.r0 + radius_jitter_sigma * dr, 0.2 * nominal.r0);
  Vec2 offset = nominal.pressure_center_offset + pressure_bias_sigma * Vec2{bx, by};
  const double limit = 0.9 * out.r0;
  if (offset.norm() > limit) offset = (limit / offset.norm()) * offset;
  out.pressure_center_offset = offset;
  return out;
}

PoseSE2 observe(const PoseSE2& true_pose, const NoiseModel& noise, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double nx = unit(rng);
  const double ny = unit(rng);
  const double nt = unit(rng);
  return {true_pose.x() + noise.pos_sigma * nx, true_pose.y() + noise.pos_sigma * ny,
          true_pose.theta() + noise.angle_sigma * nt};
}

ContactState primitive_reorient(const ContactState& state, double target_theta, double lo,
                                double hi) {
  if (!(target_theta >= lo && target_theta <= hi)) {
    throw Error(ErrorCode::kOrientationLimit,
                "finger orientation " + std::to_string(target_theta) + " rad outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double delta = target_theta - state.finger_w.theta();
  if (delta == 0.0) return state;
  ContactState out = state;
  const Vec2 pivot = state.finger_w.translation();
  const PoseSE2 rotation{pivot - rotate(pivot, delta), delta};
  out.finger_w = PoseSE2{pivot, target_theta};
  out.object_w = compose(rotation, state.object_w);
  out.vibration_on = false;
  return out;
}

SimEnvironment::SimEnvironment(ContactState initial, ObjectModel object, NoiseModel noise, Rng rng,
                               IntegratorConfig integrator)
    : state_(std::move(initial)),
      object_(std::move(object)),
      noise_(noise),
      rng_(std::move(rng)),
      integrator_(integrator) {
  state_.patch.validate();
  object_.validate();
  noise_.validate();
  state_.vibration_on = false;
}

PoseSE2 SimEnvironment::observe_object() { return observe(state_.object_w, noise_, rng_); }

void SimEnvironment::reorient(double target_theta, double lo, double hi) {
  state_ = primitive_reorient(state_, target_theta, lo, hi);
}

PulseResult SimEnvironment::pulse(const PulseSpec& pulse) {
  ContactState vibrating = state_;
  vibrating.vibration_on = true;
  PulseResult out = vibration_pulse(vibrating, object_, pulse, integrator_);
  out.state.vibration_on = false;
  state_ = out.state;
  return out;
}

}  // namespace vib2move
