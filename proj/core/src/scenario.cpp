#include "vib2move/scenario.hpp"

#include "vib2move/errors.hpp"

namespace vib2move {

void Scenario::validate() const {
  object.validate();
  patch.validate();
  noise.validate();
  perturbation.validate();
  planner.validate();
  if (!object.footprint_contains(initial_relative.translation())) {
    throw Error(ErrorCode::kInvalidArgument, "initial finger position lies outside the object");
  }
  if (!object.footprint_contains(goal_relative.translation())) {
    throw Error(ErrorCode::kInvalidArgument, "goal finger position lies outside the object");
  }
}

ContactState initial_state(const Scenario& s, const ContactPatch& patch) {
  const PoseSE2 finger{0.0, 0.0, s.initial_finger_theta};
  return {finger, compose(finger, inverse(s.initial_relative)), patch, false};
}

SimEnvironment make_environment(const Scenario& s, Rng rng) {
  const ContactPatch plant_patch = s.perturbation.sample(s.patch, rng);
  return SimEnvironment(initial_state(s, plant_patch), s.object, s.noise, std::move(rng),
                        s.planner.integrator);
}

}  // namespace vib2move
