#include "vib2move/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "vib2move/errors.hpp"

namespace vib2move {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rms(double sum_sq, std::size_t n) {
  return n == 0 ? kNaN : std::sqrt(sum_sq / static_cast<double>(n));
}

/// Runs fn(i) for i in [0, n) on a small pool. Each index writes only its own
/// slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

MetricsReport aggregate(std::vector<TrialRecord> trials, const std::vector<Scenario>& objects) {
  MetricsReport report;
  struct Acc {
    std::size_t n = 0, ok = 0;
    double pos_sq = 0.0, ang_sq = 0.0, rel_sq = 0.0;
  };
  std::map<std::string, const Scenario*> by_name;
  for (const auto& s : objects) by_name.emplace(s.name, &s);

  std::map<std::string, Acc> acc;
  Acc total;
  for (const auto& t : trials) {
    const auto it = by_name.find(t.object);
    const double max_len = it != by_name.end() ? it->second->object.max_length() : kNaN;
    for (Acc* a : {&acc[t.object], &total}) {
      ++a->n;
      if (!t.success) continue;
      ++a->ok;
      a->pos_sq += t.pos_error * t.pos_error;
      a->ang_sq += t.angle_error * t.angle_error;
      const double rel = t.pos_error / max_len;
      a->rel_sq += rel * rel;
    }
  }

  // Keep the caller's object order.
  for (const auto& s : objects) {
    const auto it = acc.find(s.name);
    if (it == acc.end()) continue;
    const Acc& a = it->second;
    ObjectMetrics m;
    m.object = s.name;
    m.extents = s.object.extents;
    m.mass = s.object.mass;
    m.n_trials = a.n;
    m.rmse_pos = rms(a.pos_sq, a.ok);
    m.rmse_angle = rms(a.ang_sq, a.ok);
    m.rel_error_pct = 100.0 * m.rmse_pos / s.object.max_length();
    m.success_rate = a.n == 0 ? 0.0 : static_cast<double>(a.ok) / static_cast<double>(a.n);
    report.per_object.push_back(m);
  }
  report.rmse_pos = rms(total.pos_sq, total.ok);
  report.rmse_angle = rms(total.ang_sq, total.ok);
  report.rel_error_pct = 100.0 * rms(total.rel_sq, total.ok);
  report.success_rate =
      total.n == 0 ? 0.0 : static_cast<double>(total.ok) / static_cast<double>(total.n);
  report.trials = std::move(trials);
  return report;
}

MetricsReport run_single_pulse_eval(const SinglePulseEvalConfig& cfg) {
  if (cfg.n_trials < 1) throw Error(ErrorCode::kInvalidArgument, "n_trials must be at least 1");
  PulseSpec{cfg.ds, cfg.n_steps}.validate();
  const Scenario& base = cfg.base;
  base.object.validate();
  base.patch.validate();

  std::vector<TrialRecord> trials(cfg.n_trials);
  parallel_for(cfg.n_trials, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, i);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double margin = base.patch.r0;
    const Vec2 half{0.5 * base.object.extents.x - margin, 0.5 * base.object.extents.y - margin};
    const PoseSE2 rel{std::max(half.x, 0.0) * unit(rng), std::max(half.y, 0.0) * unit(rng),
                      kPi * unit(rng)};
    const double lo = base.planner.finger_theta_min;
    const double hi = base.planner.finger_theta_max;
    const double finger_theta = lo + (hi - lo) * 0.5 * (unit(rng) + 1.0);

    Scenario s = base;
    s.initial_relative = rel;
    s.initial_finger_theta = finger_theta;
    const ContactPatch plant_patch = base.perturbation.sample(base.patch, rng);
    ContactState truth = initial_state(s, plant_patch);
    ContactState model = initial_state(s, base.patch);
    truth.vibration_on = model.vibration_on = true;

    TrialRecord rec;
    rec.object = base.name;
    rec.trial = i;
    rec.start = rel;
    const PulseSpec pulse{cfg.ds, cfg.n_steps};
    try {
      const ContactState true_end = vibration_pulse(truth, base.object, pulse).state;
      const ContactState pred_end = vibration_pulse(model, base.object, pulse).state;
      const PoseSE2 measured_obj = observe(true_end.object_w, base.noise, rng);
      // Object pose in the finger frame.
      const PoseSE2 measured = relative_pose(measured_obj, true_end.finger_w);
      const PoseSE2 predicted = relative_pose(pred_end.object_w, pred_end.finger_w);
      rec.goal = predicted;
      rec.pos_error = (measured.translation() - predicted.translation()).norm();
      rec.angle_error = std::abs(wrap_angle(measured.theta() - predicted.theta()));
      rec.success = true;
      rec.pulses = 1;
    } catch (const Error& e) {
      rec.failure = std::string(to_string(e.code())) + ": " + e.what();
    }
    trials[i] = rec;
  });
  return aggregate(std::move(trials), {base});
}

bool GoalSampler::feasible(const Scenario& s, const PoseSE2& goal) const {
  const Vec2 g = goal.translation();
  if (std::abs(g.x) > 0.5 * s.object.extents.x - footprint_margin ||
      std::abs(g.y) > 0.5 * s.object.extents.y - footprint_margin) {
    return false;
  }
  if ((g - s.object.com_offset).norm() < s.planner.r_error) return false;
  PlannerConfig strict = s.planner;
  strict.finger_theta_min += orientation_margin;
  strict.finger_theta_max -= orientation_margin;
  try {
    check_reachability({s.object, s.patch, goal}, initial_state(s, s.patch), strict);
  } catch (const Error&) {
    return false;
  }
  return true;
}

PoseSE2 GoalSampler::sample(const Scenario& s, Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double radius = max_translation * std::sqrt(unit(rng));
    const double bearing = 2.0 * kPi * unit(rng);
    const double dtheta = max_rotation * (2.0 * unit(rng) - 1.0);
    const PoseSE2 goal{s.initial_relative.translation() + radius * Vec2{std::cos(bearing),
                                                                         std::sin(bearing)},
                       s.initial_relative.theta() + dtheta};
    if (feasible(s, goal)) return goal;
  }
  throw Error(ErrorCode::kInvalidArgument, "goal sampler found no feasible goal for " + s.name);
}

TrialRecord run_trial(const Scenario& s, std::size_t trial, std::uint64_t seed, PlanResult* out) {
  SimEnvironment env = make_environment(s, make_rng(seed, 2 * trial + 1));
  PlanResult result = plan_and_execute(s.problem(), env, s.planner);
  TrialRecord rec;
  rec.object = s.name;
  rec.trial = trial;
  rec.start = s.initial_relative;
  rec.goal = s.goal_relative;
  rec.success = result.success;
  if (result.failure) {
    rec.failure = std::string(to_string(*result.failure)) + ": " + result.failure_message;
  }
  rec.pos_error = result.final_pos_error;
  rec.angle_error = result.final_angle_error;
  rec.pulses = result.pulse_count();
  if (out) *out = std::move(result);
  return rec;
}

MetricsReport run_reconfiguration_eval(const ReconfigurationEvalConfig& cfg) {
  const std::size_t per = cfg.n_paths_per_object;
  const std::size_t n = cfg.objects.size() * per;
  std::vector<TrialRecord> trials(n);
  parallel_for(n, [&](std::size_t i) {
    Scenario s = cfg.objects[i / per];
    TrialRecord rec;
    try {
      Rng goal_rng = make_rng(cfg.seed, 2 * i);
      s.goal_relative = cfg.goal_sampler.sample(s, goal_rng);
      rec = run_trial(s, i, cfg.seed);
    } catch (const Error& e) {
      rec.object = s.name;
      rec.trial = i;
      rec.failure = std::string(to_string(e.code())) + ": " + e.what();
    }
    trials[i] = rec;
  });
  return aggregate(std::move(trials), cfg.objects);
}

}  // namespace vib2move
