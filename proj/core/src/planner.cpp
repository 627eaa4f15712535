#include "vib2move/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace vib2move {
namespace {

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

Vec2 pressure_center_object(const ContactState& s) {
  return s.relative().transform_point(s.patch.pressure_center_offset);
}

/// Belief with the finger at `relative` (object frame) and the finger
/// oriented at finger_theta in the world.
ContactState belief_from_relative(const PoseSE2& relative, double finger_theta,
                                  const ContactPatch& patch) {
  const PoseSE2 finger{0.0, 0.0, finger_theta};
  return {finger, compose(finger, inverse(relative)), patch, false};
}

double project_orientation(double theta, double lo, double hi) {
  if (auto fit = fit_orientation(theta, lo, hi)) return *fit;
  const double to_lo = std::abs(wrap_angle(theta - lo));
  const double to_hi = std::abs(wrap_angle(theta - hi));
  return to_lo <= to_hi ? lo : hi;
}

double stage_metric(Stage stage, const PoseSE2& rel, const ObjectModel& obj, const PoseSE2& goal) {
  switch (stage) {
    case Stage::kCentering: return (rel.translation() - obj.com_offset).norm();
    case Stage::kPositioning: return (rel.translation() - goal.translation()).norm();
    case Stage::kOrientation: return std::abs(orientation_error(rel, goal));
  }
  return 0.0;
}

double stage_radius(Stage stage, const PlannerConfig& cfg) {
  switch (stage) {
    case Stage::kCentering: return cfg.centering_tolerance;
    case Stage::kPositioning: return cfg.positioning_tolerance;
    case Stage::kOrientation: return cfg.r_theta_error;
  }
  return cfg.r_error;
}

/// Rolls the planner's model forward from `belief` and returns the pulse
/// length (steps) with the smallest predicted stage error.
///
/// Observation noise and the unknown pressure center make the horizontal
/// CoM offset x_c uncertain by about `spread`, and the plant switches from near-rotation to fast
/// translation once its true x_c reaches zero. So the prediction is repeated
/// with the object shifted sideways by +-spread (error averaged over
/// members), and from the first step at which any member is within 2 spread
/// of x_c = 0 the worst-case translation ds / (mg)^2 per step is charged against
/// the travel cap.
int choose_pulse_steps(const ContactState& belief, const ObjectModel& obj, Stage stage,
                       const PoseSE2& goal, const PlannerConfig& cfg, double spread) {
  std::vector<ContactState> members{belief};
  const double sigma = spread;
  if (sigma > 0.0) {
    for (double side : {-1.0, 1.0}) {
      ContactState m = belief;
      m.object_w =
          PoseSE2{m.object_w.x() + side * sigma, m.object_w.y(), m.object_w.theta()};
      members.push_back(m);
    }
  }
  std::vector<PoseSE2> start;
  for (auto& m : members) {
    m.vibration_on = true;
    start.push_back(m.relative());
  }
  auto mean_error = [&] {
    double sum = 0.0;
    for (const auto& m : members) sum += stage_metric(stage, m.relative(), obj, goal);
    return sum / static_cast<double>(members.size());
  };
  auto near_balance = [&] {
    for (const auto& m : members) {
      if (std::abs(lever_arm_x(m.finger_w, m.object_w, m.patch, obj)) < 2.0 * sigma) return true;
    }
    return false;
  };
  const double mg = obj.mass * obj.gravity;
  const double max_step_travel = cfg.pulse_ds / (mg * mg);
  double worst_travel = 0.0;
  // A worst-case slide must not carry the contact far past the target.
  double travel_cap = cfg.max_pulse_translation;
  if (stage != Stage::kOrientation) {
    travel_cap = std::min(travel_cap, stage_metric(stage, belief.relative(), obj, goal) +
                                          stage_radius(stage, cfg));
  }

  double best_err = mean_error();
  int best_n = 1;
  for (int n = 1; n <= cfg.max_pulse_steps; ++n) {
    if (sigma > 0.0 && (worst_travel > 0.0 || near_balance())) {
      worst_travel += max_step_travel;
      if (worst_travel > travel_cap) break;
    }
    try {
      for (auto& m : members) m = slide_step(m, obj, cfg.pulse_ds, cfg.integrator);
    } catch (const Error&) {
      break;
    }
    bool capped = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const PoseSE2 rel = members[i].relative();
      capped = capped ||
               (rel.translation() - start[i].translation()).norm() > cfg.max_pulse_translation ||
               std::abs(wrap_angle(rel.theta() - start[i].theta())) > cfg.max_pulse_rotation;
    }
    if (capped) break;
    const double err = mean_error();
    if (err < best_err) {
      best_err = err;
      best_n = n;
    } else if (err > best_err + 1e-9) {
      break;
    }
  }
  return best_n;
}

/// Predicted relative pose after n steps with a given pressure-center offset.
std::optional<PoseSE2> predict_relative(ContactState s, Vec2 offset, const ObjectModel& obj,
                                        int n, const PlannerConfig& cfg) {
  s.patch.pressure_center_offset = offset;
  s.vibration_on = true;
  try {
    for (int i = 0; i < n; ++i) s = slide_step(s, obj, cfg.pulse_ds, cfg.integrator);
  } catch (const Error&) {
    return std::nullopt;
  }
  return s.relative();
}

/// Runs the orientation stage on the model from a finger at `start` (object
/// frame) and returns where the contact ends up. Planner errors propagate.
Vec2 simulate_orientation_stage(const PoseSE2& start, double finger_theta, const ContactPatch& patch,
                                const ObjectModel& obj, const PoseSE2& goal,
                                const PlannerConfig& cfg) {
  ContactState s = belief_from_relative(start, finger_theta, patch);
  for (int i = 0; i < cfg.max_actions_per_stage; ++i) {
    if (std::abs(orientation_error(s.relative(), goal)) < 0.5 * cfg.r_theta_error) break;
    const double t = subgoal_orientation(s, obj, goal, cfg);
    s = primitive_reorient(s, t, cfg.finger_theta_min, cfg.finger_theta_max);
    const int n = choose_pulse_steps(s, obj, Stage::kOrientation, goal, cfg, cfg.belief_sigma);
    s.vibration_on = true;
    for (int k = 0; k < n; ++k) s = slide_step(s, obj, cfg.pulse_ds, cfg.integrator);
    s.vibration_on = false;
  }
  return s.relative().translation();
}

/// Orientation correction drags the contact around the CoM by an amount
/// fixed by the rotation it performs. The positioning stage therefore aims
/// at the point from which the model's orientation stage ends on the goal,
/// found by fixed-point iteration in polar coordinates about the CoM.
struct CompensatedAim {
  PoseSE2 aim;
  /// Predicted distance from the goal after the orientation stage; infinite
  /// if the model could not run it.
  double miss{0.0};
};

CompensatedAim compensated_goal(const ContactState& belief, const ObjectModel& obj,
                                const PoseSE2& goal, const PlannerConfig& cfg) {
  const Vec2 com = obj.com_offset;
  const Vec2 radial = goal.translation() - com;
  const PoseSE2 rel = belief.relative();
  if (radial.norm() < cfg.r_error ||
      std::abs(orientation_error(rel, goal)) < cfg.r_theta_error) {
    return {goal, 0.0};
  }
  auto polar = [](Vec2 v) { return std::pair{v.norm(), std::atan2(v.y, v.x)}; };
  const auto [r_goal, b_goal] = polar(radial);

  Vec2 aim = goal.translation();
  Vec2 best = aim;
  double best_miss = kUnreachable;
  for (int iter = 0; iter < 8; ++iter) {
    Vec2 end;
    try {
      end = simulate_orientation_stage(PoseSE2{aim, rel.theta()}, belief.finger_w.theta(),
                                       belief.patch, obj, goal, cfg);
    } catch (const Error&) {
      break;
    }
    const double miss = (end - goal.translation()).norm();
    if (miss < best_miss) {
      best_miss = miss;
      best = aim;
    }
    if (miss < 0.1 * cfg.positioning_tolerance) break;
    const auto [r_end, b_end] = polar(end - com);
    const auto [r_aim, b_aim] = polar(aim - com);
    const double r_next = std::max(0.5 * cfg.r_error, r_aim - (r_end - r_goal));
    const double b_next = b_aim - wrap_angle(b_end - b_goal);
    aim = com + r_next * Vec2{std::cos(b_next), std::sin(b_next)};
  }
  return {PoseSE2{best, goal.theta()}, best_miss};
}

/// Whether the finger must be re-centered and re-positioned before the
/// orientation stage can finish inside the goal ball.
bool needs_positioning(const ContactState& belief, const ObjectModel& obj, const PoseSE2& goal,
                       const PlannerConfig& cfg) {
  const PoseSE2 rel = belief.relative();
  if ((rel.translation() - goal.translation()).norm() >= cfg.r_error) return true;
  if (std::abs(orientation_error(rel, goal)) < cfg.r_theta_error) return false;
  try {
    const Vec2 end = simulate_orientation_stage(rel, belief.finger_w.theta(), belief.patch, obj,
                                                goal, cfg);
    return (end - goal.translation()).norm() >= 0.5 * cfg.r_error;
  } catch (const Error&) {
    return true;
  }
}

/// Whether the contact must return to the CoM before positioning. The
/// positioning slide runs radially outward from the CoM, so an aim further
/// out on (nearly) the current ray is reached directly.
bool needs_centering(const ContactState& belief, const ObjectModel& obj, const PoseSE2& aim,
                     const PlannerConfig& cfg) {
  const PoseSE2 rel = belief.relative();
  const Vec2 out = rel.translation() - obj.com_offset;
  const double r = out.norm();
  if (r < cfg.centering_tolerance) return false;
  const Vec2 u = (1.0 / r) * out;
  const Vec2 to_aim = aim.translation() - obj.com_offset;
  const double lateral = std::abs(u.x * to_aim.y - u.y * to_aim.x);
  if (!(to_aim.dot(u) >= r && lateral < cfg.positioning_tolerance)) return true;
  if ((aim.translation() - rel.translation()).norm() < cfg.integrator.rest_tolerance) return false;
  return !fit_orientation(subgoal_positioning(belief, obj, aim), cfg.finger_theta_min,
                          cfg.finger_theta_max);
}

class Executor {
 public:
  Executor(const PlanProblem& problem, SimEnvironment& env, const PlannerConfig& cfg)
      : problem_(problem),
        env_(env),
        cfg_(cfg),
        posterior_(problem.nominal_patch.pressure_center_offset, cfg.pressure_center_prior_sigma,
                   problem.nominal_patch.r0) {
    pi_.pressure_center_estimate = problem.nominal_patch.pressure_center_offset;
    result_.trajectory.push_back(make_record(0, env_.state(), env_.object(), cfg_.integrator));
    observed_object_ = env_.observe_object();
  }

  PlanResult run() {
    try {
      execute();
    } catch (const Error& e) {
      result_.failure = e.code();
      result_.failure_message = context_ + std::string(e.what());
    }
    const PoseSE2 rel = env_.state().relative();
    result_.final_pos_error = (rel.translation() - problem_.goal.translation()).norm();
    result_.final_angle_error = std::abs(orientation_error(rel, problem_.goal));
    result_.success = !result_.failure.has_value();
    return std::move(result_);
  }

 private:
  ContactState belief() const {
    ContactPatch patch = problem_.nominal_patch;
    patch.pressure_center_offset = pi_.pressure_center_estimate;
    return {env_.finger_pose(), observed_object_, patch, false};
  }

  /// Sideways uncertainty of x_c for the finger orientation in `b`.
  double spread(const ContactState& b) const {
    const Vec2 horizontal = rotate({1.0, 0.0}, -b.finger_w.theta());
    return std::hypot(cfg_.belief_sigma, posterior_.spread(horizontal));
  }

  bool at_goal(const PoseSE2& rel) const {
    return stage_metric(Stage::kPositioning, rel, problem_.object, problem_.goal) < cfg_.r_error &&
           stage_metric(Stage::kOrientation, rel, problem_.object, problem_.goal) <
               cfg_.r_theta_error;
  }

  void execute() {
    const PoseSE2 rel0 = belief().relative();
    if (at_goal(rel0)) return;
    context_ = "reachability check: ";
    check_reachability(problem_, belief(), cfg_);
    context_.clear();

    for (int pass = 0; pass <= cfg_.max_refinement_passes; ++pass) {
      if (pass > 0) {
        context_ = "refinement pass " + std::to_string(pass) + ": ";
        check_reachability(problem_, belief(), cfg_);
        context_.clear();
      }
      if (needs_positioning(belief(), problem_.object, problem_.goal, cfg_)) {
        const PoseSE2 aim = stage_goal(Stage::kPositioning, belief());
        if (needs_centering(belief(), problem_.object, aim, cfg_)) {
          run_stage(Stage::kCentering, pass);
        }
        run_stage(Stage::kPositioning, pass);
      }
      run_stage(Stage::kOrientation, pass);
      if (at_goal(belief().relative())) return;
    }
  }

  /// Goal the stage guard and subgoal refer to.
  PoseSE2 stage_goal(Stage stage, const ContactState& b) const {
    if (stage != Stage::kPositioning) return problem_.goal;
    return compensated_goal(b, problem_.object, problem_.goal, cfg_).aim;
  }

  /// Centering orientation chosen by a one-pulse lookahead. The contact
  /// slides straight down while the rotation follows the sign of x_c, so the
  /// candidates tilt the finger-to-CoM ray by up to cfg_.centering_max_tilt
  /// from the vertical, and the score trades the predicted distance to the CoM
  /// against the predicted orientation error (cfg_.centering_orientation_weight).
  double centering_orientation(const ContactState& b) const {
    const double lo = cfg_.finger_theta_min;
    const double hi = cfg_.finger_theta_max;
    const ObjectModel& obj = problem_.object;
    const double d = (obj.com_offset - b.relative().translation()).norm();
    if (cfg_.centering_candidates < 2 || d < cfg_.integrator.rest_tolerance) {
      return project_orientation(subgoal_centering(b, obj), lo, hi);
    }
    const PoseSE2 com_goal{obj.com_offset, problem_.goal.theta()};
    const double above = subgoal_positioning(b, obj, com_goal);
    const double max_tilt = cfg_.centering_max_tilt;
    double best = project_orientation(above, lo, hi);
    double best_score = kUnreachable;
    for (int i = 0; i < cfg_.centering_candidates; ++i) {
      const double u = -1.0 + 2.0 * i / (cfg_.centering_candidates - 1);
      const double theta = project_orientation(above + u * max_tilt, lo, hi);
      const ContactState turned = primitive_reorient(b, theta, lo, hi);
      const int n = choose_pulse_steps(turned, obj, Stage::kCentering, com_goal, cfg_,
                                       spread(turned));
      const auto rel =
          predict_relative(turned, turned.patch.pressure_center_offset, obj, n, cfg_);
      if (!rel) continue;
      const double score =
          stage_metric(Stage::kCentering, *rel, obj, com_goal) +
          cfg_.centering_orientation_weight * std::abs(orientation_error(*rel, problem_.goal));
      if (score < best_score) {
        best_score = score;
        best = theta;
      }
    }
    return best;
  }

  double target_orientation(Stage stage, const ContactState& b, const PoseSE2& goal) const {
    switch (stage) {
      case Stage::kCentering: return centering_orientation(b);
      case Stage::kPositioning:
        return project_orientation(subgoal_positioning(b, problem_.object, goal),
                                   cfg_.finger_theta_min, cfg_.finger_theta_max);
      case Stage::kOrientation:
        return subgoal_orientation(b, problem_.object, goal, cfg_);
    }
    return b.finger_w.theta();
  }

  void run_stage(Stage stage, int pass) {
    context_ = "stage " + std::to_string(static_cast<int>(stage)) + " (" +
               std::string(to_string(stage)) + "), pass " + std::to_string(pass) + ": ";
    pi_.integral = {};
    StageLog log{stage, pass, 0, false, 0.0, 0.0, 0.0, 0.0};
    stage_goal_ = stage_goal(stage, belief());
    log.start_error = stage_metric(stage, belief().relative(), problem_.object, stage_goal_);
    log.start_goal_distance = true_goal_distance();
    result_.stage_logs.push_back(log);
    const std::size_t log_index = result_.stage_logs.size() - 1;

    for (int iteration = 0;; ++iteration) {
      if (iteration > 0) stage_goal_ = stage_goal(stage, belief());
      const double err = stage_metric(stage, belief().relative(), problem_.object, stage_goal_);
      result_.stage_logs[log_index].end_error = err;
      result_.stage_logs[log_index].end_goal_distance = true_goal_distance();
      if (err < stage_radius(stage, cfg_)) {
        result_.stage_logs[log_index].converged = true;
        context_.clear();
        return;
      }
      if (iteration >= cfg_.max_actions_per_stage) {
        throw Error(ErrorCode::kStageTimeout,
                    "no convergence after " + std::to_string(cfg_.max_actions_per_stage) +
                        " actions (error " + std::to_string(err) + ")");
      }
      // An orientation correction that runs into the joint limits is handed
      // to the next refinement pass, which re-centers and re-aims.
      if (stage == Stage::kOrientation && pass < cfg_.max_refinement_passes) {
        try {
          target_orientation(stage, belief(), stage_goal_);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kOrientationLimit) throw;
          context_.clear();
          return;
        }
      }
      result_.stage_logs[log_index].iterations = iteration + 1;
      step(stage, pass, iteration);
    }
  }

  void step(Stage stage, int pass, int iteration) {
    // Reorient without vibration.
    ContactState b = belief();
    const double target = target_orientation(stage, b, stage_goal_);
    env_.reorient(target, cfg_.finger_theta_min, cfg_.finger_theta_max);
    b = primitive_reorient(b, target, cfg_.finger_theta_min, cfg_.finger_theta_max);
    observed_object_ = b.object_w;
    push_trajectory_state();
    log_action(stage, pass, iteration, ActionKind::kReorient, 0, b.relative());

    // Vibrate for a model-chosen duration.
    const int n = choose_pulse_steps(b, problem_.object, stage, stage_goal_, cfg_, spread(b));
    const PulseResult pulse = env_.pulse({cfg_.pulse_ds, n});
    for (std::size_t i = 1; i < pulse.trajectory.size(); ++i) {
      TrajectoryRecord rec = pulse.trajectory[i];
      rec.step = result_.trajectory.size();
      result_.trajectory.push_back(rec);
    }
    const auto predicted =
        predict_relative(b, b.patch.pressure_center_offset, problem_.object, n, cfg_);
    log_action(stage, pass, iteration, ActionKind::kPulse, n, predicted.value_or(b.relative()));

    // Observe, then correct the pressure-center estimate.
    observed_object_ = env_.observe_object();
    const PoseSE2 observed_rel = relative_pose(env_.finger_pose(), observed_object_);
    posterior_.update(b, problem_.object, n, observed_rel, cfg_);
    pi_ = pi_update(pi_, posterior_.mode() - pi_.pressure_center_estimate, cfg_.pi_gains,
                    problem_.nominal_patch.r0);
    log_action(stage, pass, iteration, ActionKind::kObserve, 0, observed_rel);
  }

  void push_trajectory_state() {
    result_.trajectory.push_back(
        make_record(result_.trajectory.size(), env_.state(), env_.object(), cfg_.integrator));
  }

  double true_goal_distance() const {
    return (env_.state().relative().translation() - problem_.goal.translation()).norm();
  }

  void log_action(Stage stage, int pass, int iteration, ActionKind kind, int n_steps,
                  const PoseSE2& believed) {
    ActionRecord rec;
    rec.index = result_.actions.size();
    rec.stage = stage;
    rec.pass = pass;
    rec.iteration = iteration;
    rec.kind = kind;
    rec.finger_theta = env_.finger_pose().theta();
    rec.n_steps = n_steps;
    rec.believed_relative = believed;
    rec.true_relative = env_.state().relative();
    rec.pressure_center_estimate = pi_.pressure_center_estimate;
    rec.stage_error = stage_metric(stage, believed, problem_.object, stage_goal_);
    result_.actions.push_back(rec);
  }

  const PlanProblem& problem_;
  SimEnvironment& env_;
  const PlannerConfig& cfg_;
  PiState pi_;
  PressureCenterPosterior posterior_;
  PoseSE2 stage_goal_;
  PoseSE2 observed_object_;
  PlanResult result_;
  std::string context_;
};

}  // namespace

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::kCentering: return "centering";
    case Stage::kPositioning: return "positioning";
    case Stage::kOrientation: return "orientation";
  }
  return "unknown";
}

std::string_view to_string(ActionKind k) noexcept {
  switch (k) {
    case ActionKind::kReorient: return "reorient";
    case ActionKind::kPulse: return "pulse";
    case ActionKind::kObserve: return "observe";
  }
  return "unknown";
}

void PlannerConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(r_error > integrator.rest_tolerance)) fail("r_error must exceed the rest tolerance");
  if (!(r_theta_error > 0.0)) fail("r_theta_error must be positive");
  for (double tol : {centering_tolerance, positioning_tolerance}) {
    if (!(tol > integrator.rest_tolerance && tol <= r_error)) {
      fail("stage landing tolerances must lie in (rest tolerance, r_error]");
    }
  }
  if (!(finger_theta_min < finger_theta_max)) fail("finger orientation limits must satisfy lo < hi");
  if (!(lever_angle_stage3 > 0.0 && lever_angle_stage3 < kPi / 2.0)) {
    fail("lever_angle_stage3 must lie in (0, pi/2)");
  }
  if (!(min_lever_angle > 0.0 && min_lever_angle <= lever_angle_stage3)) {
    fail("min_lever_angle must lie in (0, lever_angle_stage3]");
  }
  if (max_actions_per_stage < 1) fail("max_actions_per_stage must be at least 1");
  if (!(pulse_ds > 0.0) || max_pulse_steps < 1) fail("pulse step and count must be positive");
  if (!(belief_sigma >= 0.0)) fail("belief_sigma must be non-negative");
  if (!(centering_max_tilt >= 0.0 && centering_max_tilt < kPi / 2.0)) {
    fail("centering_max_tilt must lie in [0, pi/2)");
  }
  if (!(centering_orientation_weight >= 0.0)) {
    fail("centering_orientation_weight must be non-negative");
  }
  if (!(pressure_center_prior_sigma > 0.0)) fail("pressure_center_prior_sigma must be positive");
  if (!(posterior_tempering > 0.0 && posterior_tempering <= 1.0)) {
    fail("posterior_tempering must lie in (0, 1]");
  }
  if (!(max_pulse_translation > 0.0 && max_pulse_rotation > 0.0)) fail("pulse caps must be positive");
  if (max_refinement_passes < 0) fail("max_refinement_passes must be non-negative");
  if (!(pi_gains.kp >= 0.0 && pi_gains.ki >= 0.0)) fail("PI gains must be non-negative");
}

PiState pi_update(const PiState& pi, Vec2 observed_error, const PiGains& gains, double r0) {
  PiState out = pi;
  out.integral = pi.integral + observed_error;
  out.pressure_center_estimate =
      pi.pressure_center_estimate + gains.kp * observed_error + gains.ki * out.integral;
  // Strictly inside the patch.
  const double limit = r0 * (1.0 - 1e-9);
  const double norm = out.pressure_center_estimate.norm();
  if (norm >= limit) {
    out.pressure_center_estimate = (limit / norm) * out.pressure_center_estimate;
  }
  return out;
}

PressureCenterPosterior::PressureCenterPosterior(Vec2 nominal, double prior_sigma, double r0,
                                                 double cell)
    : r0_(r0) {
  if (!(prior_sigma > 0.0) || !(r0 > 0.0) || !(cell > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pressure-center posterior needs positive sizes");
  }
  const double radius = 0.9 * r0;
  const int half = static_cast<int>(std::floor(radius / cell));
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      const Vec2 b{cell * i, cell * j};
      if (b.norm() > radius) continue;
      const Vec2 d = b - nominal;
      cells_.push_back(b);
      log_weight_.push_back(-0.5 * d.dot(d) / (prior_sigma * prior_sigma));
    }
  }
}

void PressureCenterPosterior::update(const ContactState& pre, const ObjectModel& obj, int n,
                                     const PoseSE2& observed, const PlannerConfig& cfg) {
  const double noise = std::max(cfg.belief_sigma, 1e-4);
  // World-horizontal axis expressed in the finger frame.
  const Vec2 axis = rotate({1.0, 0.0}, -pre.finger_w.theta());
  const Vec2 m = mean();
  const Vec2 across = m - m.dot(axis) * axis;

  // Scan the support of the current posterior, widened by the smoothing.
  const double peak = *std::max_element(log_weight_.begin(), log_weight_.end());
  double lo = kUnreachable;
  double hi = -kUnreachable;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (log_weight_[i] < peak - 20.0) continue;
    const double a = cells_[i].dot(axis);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  const double limit = std::sqrt(std::max(0.0, 0.95 * 0.95 * r0_ * r0_ - across.dot(across)));
  lo = std::max(lo - 3.0 * noise, -limit);
  hi = std::min(hi + 3.0 * noise, limit);
  if (!(hi > lo)) return;

  constexpr int kSamples = 121;
  const double h = (hi - lo) / (kSamples - 1);
  std::vector<double> nll(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    const auto rel = predict_relative(pre, across + (lo + h * k) * axis, obj, n, cfg);
    if (!rel) {
      nll[k] = kUnreachable;
      continue;
    }
    const double dx = rel->x() - observed.x();
    const double dy = rel->y() - observed.y();
    const double da = cfg.estimator_angle_weight * wrap_angle(rel->theta() - observed.theta());
    nll[k] = 0.5 * (dx * dx + dy * dy + da * da) / (noise * noise);
  }
  const double best = *std::min_element(nll.begin(), nll.end());
  if (!std::isfinite(best)) return;
  std::vector<double> like(kSamples);
  for (int k = 0; k < kSamples; ++k) like[k] = std::exp(best - nll[k]);

  // Smooth by the start-pose uncertainty (at least one sample wide).
  const double width = std::max(noise, h) / h;
  const int reach = static_cast<int>(std::ceil(3.0 * width));
  std::vector<double> smooth(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    double sum = 0.0;
    double mass = 0.0;
    for (int j = std::max(0, k - reach); j <= std::min(kSamples - 1, k + reach); ++j) {
      const double u = (j - k) / width;
      const double g = std::exp(-0.5 * u * u);
      sum += g * like[j];
      mass += g;
    }
    smooth[k] = sum / mass;
  }

  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double t = std::clamp((cells_[i].dot(axis) - lo) / h, 0.0, kSamples - 1.0);
    const int k = std::min(static_cast<int>(t), kSamples - 2);
    const double f = t - k;
    const double l = (1.0 - f) * smooth[k] + f * smooth[k + 1];
    log_weight_[i] += cfg.posterior_tempering * std::log(std::max(l, 1e-300));
  }
  const double top = *std::max_element(log_weight_.begin(), log_weight_.end());
  for (double& w : log_weight_) w -= top;
}

Vec2 PressureCenterPosterior::mean() const {
  const double top = *std::max_element(log_weight_.begin(), log_weight_.end());
  Vec2 sum{};
  double mass = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double w = std::exp(log_weight_[i] - top);
    sum = sum + w * cells_[i];
    mass += w;
  }
  return (1.0 / mass) * sum;
}

Vec2 PressureCenterPosterior::mode() const {
  const auto it = std::max_element(log_weight_.begin(), log_weight_.end());
  return cells_[static_cast<std::size_t>(it - log_weight_.begin())];
}

double PressureCenterPosterior::spread(Vec2 direction) const {
  const double top = *std::max_element(log_weight_.begin(), log_weight_.end());
  const double m = mean().dot(direction);
  double sum = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double w = std::exp(log_weight_[i] - top);
    const double d = cells_[i].dot(direction) - m;
    sum += w * d * d;
    mass += w;
  }
  return std::sqrt(sum / mass);
}

std::optional<double> fit_orientation(double theta, double lo, double hi) noexcept {
  constexpr double kSlack = 1e-12;
  const double base = wrap_angle(theta);
  for (int k : {0, -1, 1, -2, 2}) {
    const double t = base + 2.0 * kPi * k;
    if (t >= lo - kSlack && t <= hi + kSlack) return std::clamp(t, lo, hi);
  }
  return std::nullopt;
}

double orientation_error(const PoseSE2& relative, const PoseSE2& goal) noexcept {
  return wrap_angle(relative.theta() - goal.theta());
}

double subgoal_centering(const ContactState& belief, const ObjectModel& obj,
                         double singular_radius) {
  const PoseSE2 rel = belief.relative();
  const Vec2 to_com = obj.com_offset - pressure_center_object(belief);
  if (to_com.norm() < singular_radius) {
    throw Error(ErrorCode::kInvalidArgument,
                "centering singularity: pressure center coincides with the CoM");
  }
  return wrap_angle(kPi / 2.0 - std::atan2(to_com.y, to_com.x) + rel.theta());
}

double subgoal_positioning(const ContactState& belief, const ObjectModel& /*obj*/,
                           const PoseSE2& goal, double singular_radius) {
  const PoseSE2 rel = belief.relative();
  const Vec2 to_goal = goal.translation() - rel.translation();
  if (to_goal.norm() < singular_radius) {
    throw Error(ErrorCode::kInvalidArgument, "positioning singularity: finger is at the goal");
  }
  return wrap_angle(kPi / 2.0 - std::atan2(to_goal.y, to_goal.x) + rel.theta());
}

double subgoal_orientation(const ContactState& belief, const ObjectModel& obj,
                           const PoseSE2& goal, const PlannerConfig& cfg) {
  const PoseSE2 rel = belief.relative();
  const Vec2 to_com = obj.com_offset - pressure_center_object(belief);
  if (to_com.norm() == 0.0) return belief.finger_w.theta();
  const double alpha = std::atan2(to_com.y, to_com.x);
  const double err = orientation_error(rel, goal);
  // omega has the sign of -x_c, and relative orientation moves opposite to
  // the object's rotation, so x_c must carry the sign of -err.
  const double sigma = err > 0.0 ? -1.0 : 1.0;
  const Vec2 to_goal = goal.translation() - rel.translation();

  // Finger orientation for a world direction phi of the pressure-center ->
  // CoM ray, and the translational drift of the finger in the object frame
  // (world "up", since the object slides down).
  auto orientation_for = [&](double phi) { return phi + rel.theta() - alpha; };
  auto drift_score = [&](double finger_theta) {
    const double object_theta = finger_theta - rel.theta();
    return rotate({0.0, 1.0}, -object_theta).dot(to_goal);
  };

  const double lambda = cfg.lever_angle_stage3;
  struct Candidate {
    double theta;
    double score;
  };
  std::optional<Candidate> best;
  const std::array<std::pair<double, double>, 2> preferred{{
      {-kPi / 2.0 + sigma * lambda, 1e-12},  // CoM below: stable, small bias
      {kPi / 2.0 - sigma * lambda, 0.0},     // CoM above
  }};
  for (const auto& [phi, bias] : preferred) {
    if (auto t = fit_orientation(orientation_for(phi), cfg.finger_theta_min, cfg.finger_theta_max)) {
      const double score = drift_score(*t) + bias;
      if (!best || score > best->score) best = Candidate{*t, score};
    }
  }
  if (best) return best->theta;

  // Preferred levers are out of range: take the admissible orientation whose
  // lever angle is closest to the preferred one.
  std::optional<double> fallback;
  double fallback_cost = kUnreachable;
  constexpr int kSamples = 2000;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = std::min(cfg.finger_theta_max,
                              cfg.finger_theta_min + (cfg.finger_theta_max - cfg.finger_theta_min) *
                                                         static_cast<double>(i) / kSamples);
    const double phi = t - rel.theta() + alpha;
    const double horizontal = std::cos(phi);
    if (horizontal * sigma <= 0.0) continue;
    const double lever = std::asin(std::min(1.0, std::abs(horizontal)));
    if (lever < cfg.min_lever_angle) continue;
    const double cost = std::abs(lever - lambda);
    if (cost < fallback_cost) {
      fallback_cost = cost;
      fallback = t;
    }
  }
  if (!fallback) {
    throw Error(ErrorCode::kOrientationLimit,
                "no finger orientation within limits gives the required gravitational torque");
  }
  return *fallback;
}

std::size_t PlanResult::pulse_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(actions.begin(), actions.end(), [](const auto& a) {
    return a.kind == ActionKind::kPulse;
  }));
}

void check_reachability(const PlanProblem& problem, const ContactState& belief,
                        const PlannerConfig& cfg) {
  const PoseSE2 rel = belief.relative();
  const Vec2 com = problem.object.com_offset;
  const double lo = cfg.finger_theta_min;
  const double hi = cfg.finger_theta_max;
  auto require = [&](double theta, const char* what) {
    if (!fit_orientation(theta, lo, hi)) {
      throw Error(ErrorCode::kOrientationLimit,
                  std::string(what) + " needs finger orientation " + std::to_string(theta) +
                      " rad, outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };

  Vec2 stage3_start = rel.translation();
  if (needs_positioning(belief, problem.object, problem.goal, cfg)) {
    const auto direct = compensated_goal(belief, problem.object, problem.goal, cfg);
    const bool center = !(direct.miss < 0.5 * cfg.r_error) ||
                        needs_centering(belief, problem.object, direct.aim, cfg);
    if (center && (rel.translation() - com).norm() >= cfg.r_error) {
      // Centering may tilt the finger-to-CoM ray off the vertical.
      const PoseSE2 com_goal{com, problem.goal.theta()};
      const double above = subgoal_positioning(belief, problem.object, com_goal);
      bool reachable = false;
      for (double t = -cfg.centering_max_tilt; t <= cfg.centering_max_tilt + 1e-12;
           t += cfg.centering_max_tilt / 8.0) {
        reachable = reachable || fit_orientation(above + t, lo, hi).has_value();
      }
      if (!reachable) require(above, "centering");
    }
    const ContactState start =
        center ? belief_from_relative(PoseSE2{com, rel.theta()}, belief.finger_w.theta(),
                                      belief.patch)
               : belief;
    const auto [aim, miss] =
        center ? compensated_goal(start, problem.object, problem.goal, cfg) : direct;
    if (!(miss < 0.5 * cfg.r_error)) {
      throw Error(ErrorCode::kOrientationLimit,
                  "orientation correction drifts the contact off the goal for every aim point "
                  "within the joint limits");
    }
    if ((aim.translation() - start.relative().translation()).norm() >= cfg.r_error) {
      require(subgoal_positioning(start, problem.object, aim), "positioning");
    }
    stage3_start = aim.translation();
  }

  // The orientation stage is checked by running it on the model along the
  // path it will take; any orientation or drop error propagates.
  if (std::abs(orientation_error(rel, problem.goal)) >= cfg.r_theta_error) {
    simulate_orientation_stage(PoseSE2{stage3_start, rel.theta()}, belief.finger_w.theta(),
                               belief.patch, problem.object, problem.goal, cfg);
  }
}

PlanResult plan_and_execute(const PlanProblem& problem, SimEnvironment& env,
                            const PlannerConfig& cfg) {
  cfg.validate();
  problem.object.validate();
  problem.nominal_patch.validate();
  return Executor(problem, env, cfg).run();
}

}  // namespace vib2move
