#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vib2move/contact_mechanics.hpp"
#include "vib2move/errors.hpp"
#include "vib2move/se2.hpp"
#include "vib2move/sim_env.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {

enum class Stage { kCentering = 1, kPositioning = 2, kOrientation = 3 };

std::string_view to_string(Stage s) noexcept;

struct PiGains {
  double kp{0.5};
  double ki{0.1};

  friend bool operator==(const PiGains&, const PiGains&) = default;
};

struct PlannerConfig {
  double r_error{0.005};
  double r_theta_error{0.0175};
  /// Landing tolerance of the centering stage on the CoM.
  double centering_tolerance{0.0025};
  /// Landing tolerance of the positioning stage on its (drift-compensated)
  /// aim point; tighter than r_error so the orientation stage starts with
  /// margin.
  double positioning_tolerance{0.0025};
  /// Centering picks among this many finger orientations by predicting one
  /// pulse for each; fewer than two falls back to the plain subgoal.
  int centering_candidates{21};
  /// Largest tilt of the finger-to-CoM ray from the vertical among them.
  double centering_max_tilt{0.775};
  /// Weight (m/rad) of the predicted orientation error in that choice.
  double centering_orientation_weight{0.2};
  PiGains pi_gains;
  int max_actions_per_stage{200};
  /// Stage-3 lever: angle between the pressure-center -> CoM ray and the
  /// vertical. The contact drift per radian of correction is
  /// a3^2 / (d sin(lever)), so wide levers drift least.
  double lever_angle_stage3{75.0 * kPi / 180.0};
  /// Smallest lever angle accepted when the preferred one is out of reach.
  double min_lever_angle{10.0 * kPi / 180.0};
  double finger_theta_min{-1.2};
  double finger_theta_max{1.5};

  /// Expected observation error of the object position; pulse lengths are
  /// chosen to be safe for beliefs this far off sideways. Zero trusts the
  /// belief exactly.
  double belief_sigma{0.001};
  /// Arc step of the sliding update used for both prediction and execution.
  double pulse_ds{1e-3};
  int max_pulse_steps{400};
  /// Per-pulse caps on predicted contact travel and relative rotation.
  double max_pulse_translation{0.008};
  double max_pulse_rotation{0.15};
  /// Extra centering + positioning + orientation passes when the finger
  /// ends outside the goal ball.
  int max_refinement_passes{2};
  /// Weight (m/rad) of the orientation residual in the pressure-center
  /// likelihood.
  double estimator_angle_weight{0.1};
  /// Prior standard deviation of the pressure-center offset per axis.
  double pressure_center_prior_sigma{0.002};
  /// Exponent applied to each pulse likelihood. Consecutive pulses share an
  /// observation (the end of one is the start of the next), so full weight
  /// would make the posterior overconfident.
  double posterior_tempering{0.5};

  IntegratorConfig integrator;

  void validate() const;
  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct PiState {
  Vec2 integral{};
  Vec2 pressure_center_estimate{};
};

/// One discrete PI step on the pressure-center estimate (finger frame). The
/// integral accumulates the error first; the estimate is clamped to stay
/// strictly inside the patch radius r0.
PiState pi_update(const PiState& pi, Vec2 observed_error, const PiGains& gains, double r0);

/// Grid posterior over the pressure-center offset (finger frame), started
/// from a Gaussian prior around the nominal offset.
///
/// A pulse only reveals the world-horizontal component of the offset, and
/// the prediction switches abruptly between rotation and translation at
/// x_c = 0, so the likelihood is computed by scanning that component with the
/// model and spread to every cell by projection. The scan is smoothed by the
/// observation noise, since an error in the believed start pose shifts x_c
/// exactly like an error in the offset.
class PressureCenterPosterior {
 public:
  PressureCenterPosterior(Vec2 nominal, double prior_sigma, double r0, double cell = 2.5e-4);

  /// Conditions on one pulse: `pre` is the believed state (with the offset
  /// to be replaced) when an n-step pulse started, `observed` the relative
  /// pose seen afterwards.
  void update(const ContactState& pre, const ObjectModel& obj, int n, const PoseSE2& observed,
              const PlannerConfig& cfg);

  [[nodiscard]] Vec2 mean() const;
  /// Most probable grid cell.
  [[nodiscard]] Vec2 mode() const;
  /// Posterior standard deviation along a unit direction of the finger frame.
  [[nodiscard]] double spread(Vec2 direction) const;
  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

 private:
  std::vector<Vec2> cells_;
  std::vector<double> log_weight_;
  double r0_;
};

/// Maps an orientation onto the joint range [lo, hi], trying the 2*pi
/// equivalents first. Returns nullopt if no equivalent is in range.
std::optional<double> fit_orientation(double theta, double lo, double hi) noexcept;

/// Finger orientation that puts the object's CoM straight above the
/// (estimated) pressure center. `belief.patch.pressure_center_offset` is the
/// planner's estimate. Throws kInvalidArgument when the two coincide.
double subgoal_centering(const ContactState& belief, const ObjectModel& obj,
                         double singular_radius = IntegratorConfig{}.rest_tolerance);

/// Finger orientation that puts the goal contact point straight above the
/// finger, so the downward slide of the object carries the finger onto it.
double subgoal_positioning(const ContactState& belief, const ObjectModel& obj,
                           const PoseSE2& goal,
                           double singular_radius = IntegratorConfig{}.rest_tolerance);

/// Finger orientation that gives gravity a lever of about
/// cfg.lever_angle_stage3 about the pressure center, signed so the induced
/// rotation shrinks wrap(theta_rel - theta_goal). Of the admissible placements
/// (CoM below or above the contact) the one whose translational drift points
/// toward the goal position is chosen. Throws kOrientationLimit if no
/// placement with the right torque sign fits the joint range.
double subgoal_orientation(const ContactState& belief, const ObjectModel& obj,
                           const PoseSE2& goal, const PlannerConfig& cfg);

/// Signed relative-orientation error wrap(theta_e - theta_o - theta_goal).
double orientation_error(const PoseSE2& relative, const PoseSE2& goal) noexcept;

enum class ActionKind { kReorient, kPulse, kObserve };

std::string_view to_string(ActionKind k) noexcept;

struct ActionRecord {
  std::size_t index{0};
  Stage stage{Stage::kCentering};
  int pass{0};
  int iteration{0};
  ActionKind kind{ActionKind::kReorient};
  double finger_theta{0.0};
  int n_steps{0};
  /// Relative pose the planner believes in after the action.
  PoseSE2 believed_relative;
  /// Relative pose of the plant after the action.
  PoseSE2 true_relative;
  Vec2 pressure_center_estimate{};
  /// Stage guard quantity (distance in m, or |angle| in rad) from the belief.
  double stage_error{0.0};
};

struct StageLog {
  Stage stage{Stage::kCentering};
  int pass{0};
  int iterations{0};
  bool converged{false};
  double start_error{0.0};
  double end_error{0.0};
  /// True finger-to-goal distance at stage entry and exit.
  double start_goal_distance{0.0};
  double end_goal_distance{0.0};
};

struct PlanResult {
  bool success{false};
  std::optional<ErrorCode> failure;
  std::string failure_message;
  std::vector<ActionRecord> actions;
  Trajectory trajectory;
  /// Final error measured on the plant: ||p_e^o - p_g^o|| and
  /// |wrap(theta_e^o - theta_g^o)|.
  double final_pos_error{0.0};
  double final_angle_error{0.0};
  std::vector<StageLog> stage_logs;

  [[nodiscard]] std::size_t pulse_count() const noexcept;
};

/// What the planner knows: nominal object and patch, and the goal relative
/// pose of the finger in the object frame.
struct PlanProblem {
  ObjectModel object;
  ContactPatch nominal_patch;
  PoseSE2 goal;
};

/// Predicted finger orientations the three stages will command, from the
/// planner's current belief. Throws kOrientationLimit if any is outside the
/// joint range.
void check_reachability(const PlanProblem& problem, const ContactState& belief,
                        const PlannerConfig& cfg);

/// Closed-loop three-stage reconfiguration: centering, positioning, then
/// orientation adjustment, each iteration being reorient -> pulse -> observe
/// -> PI update. Runtime failures (timeouts, joint limits, drops) are
/// reported through PlanResult::failure rather than thrown.
PlanResult plan_and_execute(const PlanProblem& problem, SimEnvironment& env,
                            const PlannerConfig& cfg);

}  // namespace vib2move
