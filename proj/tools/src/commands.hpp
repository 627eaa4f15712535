#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "vib2move/errors.hpp"

namespace vib2move::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;   // the run itself failed (planner or integrator)
inline constexpr int kExitUsage = 2;    // bad arguments or invalid values
inline constexpr int kExitParse = 3;    // malformed scenario or config file
inline constexpr int kExitIo = 4;       // file could not be read or written

int exit_code(ErrorCode code) noexcept;

struct PredictOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir{"out"};
  double ds{1e-3};
  int n_steps{100};
  bool plot{true};
};

struct PlanOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir{"out"};
  std::uint64_t seed{0};
  bool plot{true};
};

struct EvaluateOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir{"out"};
  /// Replaces the seed of the config file when set.
  std::optional<std::uint64_t> seed;
  bool plot{true};
};

/// One pulse from the scenario's initial state on the nominal model.
/// Writes trajectory.csv and pulse.svg.
int cmd_predict(const PredictOptions& opt);

/// Closed-loop reconfiguration to the scenario goal. Writes actions.csv,
/// trajectory.csv, metrics.json and plan.svg, also when the plan fails.
int cmd_plan(const PlanOptions& opt);

/// Batch evaluation. Writes metrics.json, table.csv, trials.csv and
/// error_distribution.svg. Per-trial failures are part of the report and do
/// not change the exit code.
int cmd_evaluate(const EvaluateOptions& opt);

}  // namespace vib2move::cli
