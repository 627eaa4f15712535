#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vib2move/planner.hpp"
#include "vib2move/scenario.hpp"
#include "vib2move/sim_env.hpp"

namespace vib2move {

struct TrialRecord {
  std::string object;
  std::size_t trial{0};
  PoseSE2 start;
  PoseSE2 goal;
  bool success{false};
  std::string failure;
  double pos_error{0.0};
  double angle_error{0.0};
  std::size_t pulses{0};
};

struct ObjectMetrics {
  std::string object;
  Vec2 extents{};
  double mass{0.0};
  std::size_t n_trials{0};
  double rmse_pos{0.0};
  double rmse_angle{0.0};
  double rel_error_pct{0.0};
  double success_rate{0.0};
};

/// Aggregate metrics. RMSEs are taken over successful trials; a report with
/// no successes carries NaN RMSEs.
struct MetricsReport {
  double rmse_pos{0.0};
  double rmse_angle{0.0};
  double rel_error_pct{0.0};
  double success_rate{0.0};
  std::vector<ObjectMetrics> per_object;
  std::vector<TrialRecord> trials;
};

/// Builds per-object and overall metrics from trial records.
/// `objects` supplies the footprint used for the relative error.
MetricsReport aggregate(std::vector<TrialRecord> trials, const std::vector<Scenario>& objects);

struct SinglePulseEvalConfig {
  Scenario base;
  std::size_t n_trials{100};
  double ds{1e-3};
  int n_steps{40};
  std::uint64_t seed{0};
};

/// Random state, one vibration pulse on a perturbed plant, compared with the
/// nominal model's prediction. Errors are on the object pose in the finger
/// frame, as measured (with noise) versus predicted.
MetricsReport run_single_pulse_eval(const SinglePulseEvalConfig& cfg);

/// Goals within max_translation of the initial contact and max_rotation of
/// the initial relative angle, kept only if the goal patch fits on the
/// object, the goal is not inside the centering ball, and every stage
/// subgoal is reachable within the finger orientation limits.
struct GoalSampler {
  double max_translation{0.05};
  double max_rotation{60.0 * kPi / 180.0};
  double footprint_margin{0.015};
  /// Goals are checked against joint limits shrunk by this much on each
  /// side, so a noisy start estimate does not flip the verdict at run time.
  double orientation_margin{0.15};
  int max_attempts{10000};

  /// Throws kInvalidArgument if no feasible goal is found.
  PoseSE2 sample(const Scenario& s, Rng& rng) const;
  [[nodiscard]] bool feasible(const Scenario& s, const PoseSE2& goal) const;
};

struct ReconfigurationEvalConfig {
  std::vector<Scenario> objects;
  std::size_t n_paths_per_object{10};
  GoalSampler goal_sampler;
  std::uint64_t seed{0};
};

/// Runs plan_and_execute for every object and sampled goal; each trial uses
/// its own RNG stream derived from (seed, trial index). Failures are recorded,
/// never thrown.
MetricsReport run_reconfiguration_eval(const ReconfigurationEvalConfig& cfg);

/// Single trial as used by run_reconfiguration_eval.
TrialRecord run_trial(const Scenario& s, std::size_t trial, std::uint64_t seed,
                      PlanResult* out = nullptr);

}  // namespace vib2move
