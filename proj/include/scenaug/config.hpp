// Run configuration: defaults, JSON config files, flag overrides.
#pragma once

#include <cstdint>
#include <string>

#include "scenaug/eligibility.hpp"
#include "scenaug/interaction.hpp"
#include "scenaug/kinematics.hpp"
#include "scenaug/sampler.hpp"

namespace scenaug {

struct RunConfig {
  // io
  std::string input;
  std::string output;
  std::string plan_out;       // default: derived from output
  std::string summary_out;    // default: derived from output
  std::string histogram_out;  // default: derived from output
  std::string scores_out;     // empty: not written
  std::string replay_plan;    // empty: sample fresh

  SamplingConfig sampling;
  FilterConfig filters;
  ComfortThresholds comfort;
  TtcConfig ttc;

  int histogram_bins = 50;
  int jobs = 0;  // 0: one worker per hardware thread
  bool lenient = false;           // drop invalid scenes instead of aborting
  bool keep_original_ego = true;  // demote the former ego into the agent list

  // Fills empty report paths from `output`.
  void derive_output_paths();
};

// Parses a JSON config file over the given defaults. Unknown keys are a
// ConfigError, as are out-of-domain values. "tau" accepts a positive number
// or "uniform"; "filters" is an array drawn from ["disp","comf","ttc"];
// "mode" is "per_scene" or "per_ego"; "combiner" is "all" or "any";
// "window" is "history_only" or "history_and_future".
RunConfig load_config_file(const std::string& path, const RunConfig& defaults);

// Shared by config parsing and CLI flags.
Temperature parse_temperature(const std::string& text);
FilterSet parse_filter_set(const std::string& csv);
SamplingMode parse_sampling_mode(const std::string& text);

// Effective semantic configuration as JSON. Excludes io paths and execution
// knobs (jobs), so reruns of the same experiment produce identical echoes
// regardless of where and how wide they ran.
std::string config_echo_json(const RunConfig& cfg);

}  // namespace scenaug
