#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

// VIB2MOVE_LOG takes a spdlog level name: trace, debug, info, warn, error,
// critical or off. Unset or unrecognized values fall back to info.
void configure_logging() {
  auto logger = spdlog::stderr_logger_st("vib2move");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("VIB2MOVE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("VIB2MOVE_LOG='{}' is not a log level; using info", env);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  namespace cli = vib2move::cli;

  CLI::App app{"Simulate and plan vibration-driven in-hand sliding of a gripped object."};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string scenario;
  std::string config;
  app.add_option("--seed", seed, "Random seed (plan, evaluate)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--scenario", scenario, "Scenario JSON file (predict, plan)");
  app.add_option("--config", config, "Batch config JSON file (evaluate)");
  bool no_plot = false;
  app.add_flag("--no-plot", no_plot, "Skip SVG output");

  cli::PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Roll out one vibration pulse");
  predict_cmd->add_option("--ds", predict.ds, "Arc step per slide update")->capture_default_str();
  predict_cmd->add_option("--steps", predict.n_steps, "Slide updates in the pulse")
      ->capture_default_str();
  predict_cmd->fallthrough();

  auto* plan_cmd = app.add_subcommand("plan", "Plan and execute a reconfiguration");
  plan_cmd->fallthrough();
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run a batch evaluation");
  evaluate_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  const auto need = [](const std::string& value, const char* flag, const char* command) {
    if (value.empty()) {
      spdlog::error("{} needs {}", command, flag);
      return false;
    }
    return true;
  };

  if (predict_cmd->parsed()) {
    if (!need(scenario, "--scenario", "predict")) return cli::kExitUsage;
    predict.scenario = scenario;
    predict.out_dir = out_dir;
    predict.plot = !no_plot;
    return cli::cmd_predict(predict);
  }
  if (plan_cmd->parsed()) {
    if (!need(scenario, "--scenario", "plan")) return cli::kExitUsage;
    cli::PlanOptions opt;
    opt.scenario = scenario;
    opt.out_dir = out_dir;
    opt.seed = seed.value_or(0);
    opt.plot = !no_plot;
    return cli::cmd_plan(opt);
  }
  if (!need(config, "--config", "evaluate")) return cli::kExitUsage;
  cli::EvaluateOptions opt;
  opt.config = config;
  opt.out_dir = out_dir;
  opt.seed = seed;
  opt.plot = !no_plot;
  return cli::cmd_evaluate(opt);
}
