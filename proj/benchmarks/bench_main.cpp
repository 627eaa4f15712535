#include <benchmark/benchmark.h>

#include "vib2move/planner.hpp"
#include "vib2move/scenario_io.hpp"
#include "vib2move/sim_harness.hpp"
#include "vib2move/slide_integrator.hpp"

namespace {

using namespace vib2move;

const ObjectModel kObject{0.09, {0.09, 0.15}, {}, 9.81};

ContactState hanging(double x_c, double depth) {
  ContactState s;
  s.patch = {0.015, 0.6, {}};
  s.object_w = PoseSE2{x_c, -depth, 0.0};
  s.vibration_on = true;
  return s;
}

void BM_BalanceAndScale(benchmark::State& state) {
  const LimitSurface ls = build_limit_surface({0.015, 0.6, {}});
  double x_c = 0.0;
  for (auto _ : state) {
    const Wrench2D w = balance_wrench(kObject, x_c);
    benchmark::DoNotOptimize(ls_scale(ls, w));
    benchmark::DoNotOptimize(motion_direction(ls, w));
    x_c += 1e-6;
  }
}
BENCHMARK(BM_BalanceAndScale);

void BM_SlideStep(benchmark::State& state) {
  const ContactState s = hanging(0.01, 0.03);
  for (auto _ : state) benchmark::DoNotOptimize(slide_step(s, kObject, 1e-3));
}
BENCHMARK(BM_SlideStep);

void BM_VibrationPulse(benchmark::State& state) {
  // CoM level with the contact and 20 mm to the side: swings under, then slides.
  const ContactState s = hanging(-0.02, 0.0);
  const PulseSpec pulse{1e-3, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(vibration_pulse(s, kObject, pulse));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VibrationPulse)->Arg(40)->Arg(400)->Arg(3700);

void BM_PosteriorUpdate(benchmark::State& state) {
  PlannerConfig cfg;
  ContactState pre = hanging(0.004, 0.02);
  const ContactState post_state = vibration_pulse(pre, kObject, {cfg.pulse_ds, 30}).state;
  for (auto _ : state) {
    PressureCenterPosterior post({}, cfg.pressure_center_prior_sigma, pre.patch.r0);
    post.update(pre, kObject, 30, post_state.relative(), cfg);
    benchmark::DoNotOptimize(post.mode());
  }
}
BENCHMARK(BM_PosteriorUpdate)->Unit(benchmark::kMicrosecond);

void BM_PlanThreeStage(benchmark::State& state) {
  const Scenario s = load_scenario(VIB2MOVE_SCENARIO_DIR "/three_stage.json");
  for (auto _ : state) {
    PlanResult r;
    run_trial(s, 0, 7, &r);
    benchmark::DoNotOptimize(r.success);
  }
}
BENCHMARK(BM_PlanThreeStage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
