// Pairwise in-lane time-to-collision and per-scene violation reports.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "scenaug/kinematics.hpp"
#include "scenaug/scenario.hpp"

namespace scenaug {

struct FilterConfig;  // eligibility.hpp

struct TtcConfig {
  double threshold = 1.0;          // s, a timestep violates when min ttc < threshold
  double epsilon = 1e-3;           // m/s, closing-speed floor in the division
  double lateral_margin = 0.5;     // m, added to the half-width overlap gate
  double prefilter_radius = 50.0;  // m, coarse center-distance cutoff; <= 0 disables
};

// Longitudinal geometry of agent b seen from agent a's heading axis.
struct LongitudinalGeometry {
  double gap = 0.0;             // m, a's front bumper to b's rear bumper
  double closing_speed = 0.0;   // m/s, positive when a approaches b
  double lateral_offset = 0.0;  // m, signed offset of b's center from a's axis
};

LongitudinalGeometry longitudinal_geometry(const AgentState& a, const AgentState& b);

// Time to collision of a into b: gap / max(epsilon, closing_speed), finite
// only when gap > 0, closing_speed > 0, and b overlaps a's lane corridor
// (|lateral_offset| <= half widths + lateral_margin). Otherwise +infinity.
double ttc_pair(const AgentState& a, const AgentState& b, const TtcConfig& cfg);

// Number of history timesteps where the minimum ttc from this agent to any
// other track (ego included) falls below cfg.threshold. Unobserved timesteps
// of either party are skipped.
int ttc_violation_count(const SceneRecord& scene, const AgentTrack& agent, const TtcConfig& cfg);

struct AgentViolations {
  std::string agent_id;
  int ttc = 0;
  int comfort = 0;
};

struct ViolationAggregate {
  std::size_t count = 0;  // agents aggregated
  double mean_ttc = 0.0;
  double median_ttc = 0.0;
  double mean_comfort = 0.0;
  double median_comfort = 0.0;
};

struct SceneViolations {
  std::string scene_id;
  AgentViolations ego;
  std::vector<AgentViolations> others;  // eligibility pool of the scene
};

struct ViolationReport {
  std::vector<SceneViolations> scenes;
  ViolationAggregate ego;
  ViolationAggregate others;
};

// Rows for one scene: the ego plus every member of the scene's eligibility
// pool. filter_cfg only shapes the pool (radius, observability window); its
// metric filters are not applied.
SceneViolations scene_violation_rows(const SceneRecord& scene,
                                     const ComfortThresholds& comfort_cfg,
                                     const TtcConfig& ttc_cfg,
                                     const FilterConfig& filter_cfg);

ViolationAggregate aggregate_violations(const std::vector<AgentViolations>& rows);

// Violation counts of each ego against every member of its scene's
// eligibility pool, with per-group aggregates.
ViolationReport ego_vs_others_report(std::span<const SceneRecord> scenes,
                                     const ComfortThresholds& comfort_cfg,
                                     const TtcConfig& ttc_cfg,
                                     const FilterConfig& filter_cfg);

// Fixed columns: scene_id,agent_id,role,ttc_violations,comfort_violations.
std::string violation_report_csv(const ViolationReport& report);

// Aggregates only, as a JSON object string.
std::string violation_report_json(const ViolationReport& report);

}  // namespace scenaug
