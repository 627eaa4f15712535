#include "commands.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "vib2move/scenario_io.hpp"
#include "vib2move/sim_harness.hpp"
#include "vib2move/slide_integrator.hpp"
#include "vib2move/svg_plot.hpp"
#include "vib2move/trajectory_io.hpp"

namespace vib2move::cli {
namespace {

template <typename Fn>
int guarded(const char* command, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    spdlog::error("{}: {} ({})", command, e.what(), to_string(e.code()));
    return exit_code(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", command, e.what());
    return kExitFailed;
  }
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

}  // namespace

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitUsage;
    case ErrorCode::kParse: return kExitParse;
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kZeroWrench:
    case ErrorCode::kObjectDropped:
    case ErrorCode::kStageTimeout:
    case ErrorCode::kOrientationLimit: return kExitFailed;
  }
  return kExitFailed;
}

int cmd_predict(const PredictOptions& opt) {
  return guarded("predict", [&] {
    const Scenario s = load_scenario(opt.scenario);
    const PulseSpec pulse{opt.ds, opt.n_steps};
    pulse.validate();
    ContactState start = initial_state(s, s.patch);
    start.vibration_on = true;
    spdlog::info("predict: {} with {} steps of ds={}", s.name, opt.n_steps, opt.ds);

    Trajectory trajectory;
    if (opt.n_steps > 0) {
      trajectory = vibration_pulse(start, s.object, pulse, s.planner.integrator).trajectory;
    }
    std::size_t rotational = 0;
    for (const auto& r : trajectory) rotational += r.motion == MotionClass::kNearRotational;
    spdlog::debug("predict: {} of {} records near-rotational", rotational, trajectory.size());

    write_text_file(opt.out_dir / "trajectory.csv",
                    render([&](std::ostream& o) { write_trajectory_csv(o, trajectory); }));
    if (opt.plot) {
      write_text_file(opt.out_dir / "pulse.svg", plot_pulse(trajectory, s.object, s.patch));
    }
    return kExitOk;
  });
}

int cmd_plan(const PlanOptions& opt) {
  return guarded("plan", [&] {
    const Scenario s = load_scenario(opt.scenario);
    spdlog::info("plan: {} seed {}", s.name, opt.seed);
    PlanResult result;
    run_trial(s, 0, opt.seed, &result);

    for (const auto& log : result.stage_logs) {
      spdlog::debug("plan: {} pass {}: {} iterations, converged={}", to_string(log.stage),
                    log.pass, log.iterations, log.converged);
    }
    write_text_file(opt.out_dir / "actions.csv",
                    render([&](std::ostream& o) { write_actions_csv(o, result.actions); }));
    write_text_file(opt.out_dir / "trajectory.csv",
                    render([&](std::ostream& o) { write_trajectory_csv(o, result.trajectory); }));
    write_text_file(opt.out_dir / "metrics.json", plan_metrics_json(s, opt.seed, result));
    if (opt.plot) write_text_file(opt.out_dir / "plan.svg", plot_plan(result, s));

    if (!result.success) {
      const ErrorCode code = result.failure.value_or(ErrorCode::kStageTimeout);
      spdlog::error("plan: {} failed: {} ({})", s.name, result.failure_message, to_string(code));
      return exit_code(code);
    }
    spdlog::info("plan: reached goal with {} pulses, error {:.2f} mm / {:.2f} deg",
                 result.pulse_count(), result.final_pos_error * 1e3,
                 result.final_angle_error * 180.0 / kPi);
    return kExitOk;
  });
}

int cmd_evaluate(const EvaluateOptions& opt) {
  return guarded("evaluate", [&] {
    BatchConfig cfg = load_batch_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    spdlog::info("evaluate: {} objects, seed {}", cfg.objects.size(), cfg.seed);

    std::optional<MetricsReport> reconfiguration;
    std::optional<MetricsReport> single_pulse;
    if (cfg.run_reconfiguration) {
      ReconfigurationEvalConfig rc;
      rc.objects = cfg.objects;
      rc.n_paths_per_object = cfg.n_paths_per_object;
      rc.goal_sampler = cfg.goal_sampler;
      rc.seed = cfg.seed;
      reconfiguration = run_reconfiguration_eval(rc);
      for (const auto& t : reconfiguration->trials) {
        if (!t.success) spdlog::warn("evaluate: {} trial {} failed: {}", t.object, t.trial, t.failure);
      }
      spdlog::info("evaluate: reconfiguration success {:.1f}%, RMSE {:.2f} mm / {:.2f} deg",
                   100.0 * reconfiguration->success_rate, reconfiguration->rmse_pos * 1e3,
                   reconfiguration->rmse_angle * 180.0 / kPi);
    }
    if (cfg.run_single_pulse) {
      std::vector<TrialRecord> trials;
      for (std::size_t i = 0; i < cfg.objects.size(); ++i) {
        SinglePulseEvalConfig sp;
        sp.base = cfg.objects[i];
        sp.n_trials = cfg.single_pulse_trials;
        sp.ds = cfg.single_pulse_ds;
        sp.n_steps = cfg.single_pulse_steps;
        sp.seed = cfg.seed + i;
        auto part = run_single_pulse_eval(sp).trials;
        trials.insert(trials.end(), part.begin(), part.end());
      }
      single_pulse = aggregate(std::move(trials), cfg.objects);
      spdlog::info("evaluate: single-pulse RMSE {:.2f} mm / {:.2f} deg",
                   single_pulse->rmse_pos * 1e3, single_pulse->rmse_angle * 180.0 / kPi);
    }

    const MetricsReport* rc = reconfiguration ? &*reconfiguration : nullptr;
    const MetricsReport* sp = single_pulse ? &*single_pulse : nullptr;
    write_text_file(opt.out_dir / "metrics.json", evaluation_metrics_json(cfg.seed, rc, sp));
    write_text_file(opt.out_dir / "trials.csv", render([&](std::ostream& o) {
                      bool header = true;
                      if (rc) {
                        write_trials_csv(o, rc->trials, "reconfiguration", header);
                        header = false;
                      }
                      if (sp) write_trials_csv(o, sp->trials, "single_pulse", header);
                    }));
    const MetricsReport& table = rc ? *rc : *sp;
    write_text_file(opt.out_dir / "table.csv",
                    render([&](std::ostream& o) { write_metrics_table_csv(o, table); }));
    if (opt.plot) {
      write_text_file(opt.out_dir / "error_distribution.svg", plot_error_distribution(table));
    }
    return kExitOk;
  });
}

}  // namespace vib2move::cli
