#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vib2move/planner.hpp"
#include "vib2move/scenario.hpp"
#include "vib2move/sim_harness.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {

// Everything written here uses millimeters and degrees, with fixed-precision
// number formatting so repeated runs give byte-identical files.

inline constexpr std::string_view kTrajectoryCsvHeader =
    "step,t_finger_x_mm,finger_y_mm,finger_theta_deg,object_x_mm,object_y_mm,"
    "object_theta_deg,motion_class,k";

/// One row per record; an empty trajectory yields the header line only.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// The planner's action log, one row per reorient / pulse / observe.
/// The stage guard quantity goes to stage_error_mm for the two translation
/// stages and to stage_error_deg for the orientation stage.
void write_actions_csv(std::ostream& out, const std::vector<ActionRecord>& actions);

/// Per-trial rows. `run` labels the evaluation the rows came from.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials,
                      std::string_view run, bool header = true);

/// Per-object error table in the layout of the usual reconfiguration
/// results table, followed by an "Average" row.
void write_metrics_table_csv(std::ostream& out, const MetricsReport& report);

/// Summary of one planned run.
std::string plan_metrics_json(const Scenario& s, std::uint64_t seed, const PlanResult& result);

/// Summary of a batch evaluation; either report may be null when that run was
/// not requested.
std::string evaluation_metrics_json(std::uint64_t seed, const MetricsReport* reconfiguration,
                                    const MetricsReport* single_pulse);

/// Writes `content` to `path`, creating parent directories. Error(kIo) on
/// failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vib2move
