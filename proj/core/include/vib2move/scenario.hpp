#pragma once

#include <string>

#include "vib2move/contact_mechanics.hpp"
#include "vib2move/planner.hpp"
#include "vib2move/sim_env.hpp"

namespace vib2move {

/// Everything needed to set up one reconfiguration run. Poses are relative
/// finger poses in the object frame.
struct Scenario {
  std::string name{"scenario"};
  ObjectModel object;
  ContactPatch patch;
  PoseSE2 initial_relative{0.0, -0.03, 0.0};
  PoseSE2 goal_relative{0.0, -0.03, 0.0};
  double initial_finger_theta{0.0};
  NoiseModel noise;
  PerturbationModel perturbation;
  PlannerConfig planner;

  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
  [[nodiscard]] PlanProblem problem() const { return {object, patch, goal_relative}; }
};

/// World state with the finger at the origin oriented at initial_finger_theta.
ContactState initial_state(const Scenario& s, const ContactPatch& patch);

/// Plant for one run: contact parameters perturbed per s.perturbation, noise
/// per s.noise, both drawn from `rng`.
SimEnvironment make_environment(const Scenario& s, Rng rng);

}  // namespace vib2move
