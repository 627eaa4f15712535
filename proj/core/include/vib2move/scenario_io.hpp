#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vib2move/scenario.hpp"
#include "vib2move/sim_harness.hpp"

namespace vib2move {

// Scenario and batch files are JSON documents. Every length is in millimeters
// and every angle in degrees, with the unit carried in the key name
// ("r0_mm", "theta_deg", "mass_g"). Missing blocks keep the library defaults;
// an unrecognized key is a parse error naming the full key path.

/// Parses a scenario document. `source` names the input in diagnostics.
/// Throws Error(kParse) on malformed JSON (with line and column), wrong value
/// types or unknown keys, and Error(kInvalidArgument) if the result fails
/// Scenario::validate().
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");

/// Serializes the name and every field that differs from the library default,
/// so parse_scenario(write_scenario(s)) == s for any parsed scenario.
std::string write_scenario(const Scenario& s);

/// Reads a file; Error(kIo) if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Batch evaluation setup.
struct BatchConfig {
  std::uint64_t seed{0};
  std::vector<Scenario> objects;

  bool run_reconfiguration{true};
  std::size_t n_paths_per_object{10};
  GoalSampler goal_sampler;

  bool run_single_pulse{false};
  std::size_t single_pulse_trials{100};
  double single_pulse_ds{1e-3};
  int single_pulse_steps{40};
};

/// Object paths in "objects" are resolved against `base_dir`. Optional
/// "noise", "perturbation" and "planner" blocks are applied on top of every
/// object. The reconfiguration run is enabled by a "reconfiguration" block,
/// the single-pulse run by a "single_pulse" block; with neither present only
/// the reconfiguration run is performed.
BatchConfig parse_batch_config(std::string_view text, const std::filesystem::path& base_dir,
                               std::string_view source = "<config>");
BatchConfig load_batch_config(const std::filesystem::path& path);

}  // namespace vib2move
