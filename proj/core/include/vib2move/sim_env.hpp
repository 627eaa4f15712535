#pragma once

#include <cstdint>
#include <random>

#include "vib2move/contact_mechanics.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {

using Rng = std::mt19937_64;

/// Independent trial stream derived from a base seed and a trial index.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Zero-mean Gaussian pose-observation noise.
struct NoiseModel {
  double pos_sigma{0.001};
  double angle_sigma{0.0087};
  std::uint64_t seed{0};

  static NoiseModel none() noexcept { return {0.0, 0.0, 0}; }
  void validate() const;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Deviation of the true contact from the nominal one the planner assumes.
struct PerturbationModel {
  double pressure_bias_sigma{0.0};
  double radius_jitter_sigma{0.0};

  void validate() const;
  /// Samples a plant patch: nominal offset plus an isotropic Gaussian bias,
  /// nominal radius plus Gaussian jitter. The radius stays >= 0.2 * r0 and
  /// the offset stays within 0.9 of the perturbed radius.
  ContactPatch sample(const ContactPatch& nominal, Rng& rng) const;
  friend bool operator==(const PerturbationModel&, const PerturbationModel&) = default;
};

PoseSE2 observe(const PoseSE2& true_pose, const NoiseModel& noise, Rng& rng);

/// Rotates finger and object rigidly about the finger point (no slip) so the
/// finger reaches target_theta. Throws kOrientationLimit outside [lo, hi].
ContactState primitive_reorient(const ContactState& state, double target_theta, double lo,
                                double hi);

/// The "true" plant the planner acts on. Owns its state and noise stream.
class SimEnvironment {
 public:
  SimEnvironment(ContactState initial, ObjectModel object, NoiseModel noise, Rng rng,
                 IntegratorConfig integrator = {});

  [[nodiscard]] const ContactState& state() const noexcept { return state_; }
  [[nodiscard]] const ObjectModel& object() const noexcept { return object_; }
  [[nodiscard]] const PoseSE2& finger_pose() const noexcept { return state_.finger_w; }

  /// Camera-style observation of the object pose in the world frame.
  PoseSE2 observe_object();
  void reorient(double target_theta, double lo, double hi);
  /// Vibrates for one pulse, then switches vibration back off.
  PulseResult pulse(const PulseSpec& pulse);

 private:
  ContactState state_;
  ObjectModel object_;
  NoiseModel noise_;
  Rng rng_;
  IntegratorConfig integrator_;
};

}  // namespace vib2move
