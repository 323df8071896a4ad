// Per-track motion signals over the history window: heading deviation,
// displacement, body-frame accelerations/jerks, yaw rates, comfort counting.
#pragma once

#include <vector>

#include "scenaug/scenario.hpp"

namespace scenaug {

// Derivative chains over history timesteps 0 .. history_len-1. Accelerations
// and jerks are in the heading-aligned (body) frame of the agent.
struct KinematicSignals {
  std::vector<double> accel_lon;  // m/s^2
  std::vector<double> accel_lat;  // m/s^2
  std::vector<double> jerk_lon;   // m/s^3
  std::vector<double> jerk_lat;   // m/s^3
  std::vector<double> yaw_rate;   // rad/s
  std::vector<double> yaw_accel;  // rad/s^2
};

enum class ComfortCombiner {
  AllConditions,  // a timestep violates only if every bound is exceeded
  AnyCondition,   // a timestep violates if at least one bound is exceeded
};

struct ComfortThresholds {
  double max_accel_lon = 2.40;  // m/s^2
  double max_accel_lat = 4.89;  // m/s^2
  double max_jerk_lon = 4.13;   // m/s^3
  double max_jerk_lat = 4.13;   // m/s^3
  double max_yaw_rate = 0.95;   // rad/s
  double max_yaw_accel = 1.93;  // rad/s^2
  ComfortCombiner combiner = ComfortCombiner::AllConditions;
};

// Sum of |wrapped heading steps| over the history window. Requires
// history_len >= 2 and observed history states.
double heading_deviation_sum(const AgentTrack& track, int history_len);

// Straight-line distance between first and last history positions.
double displacement(const AgentTrack& track, int history_len);

// Differentiates recorded velocities (rotated into the body frame per
// timestep) and headings. Second-order central differences inside, one-sided
// second-order stencils at the window ends. Requires history_len >= 4, dt > 0,
// and observed history states; throws std::invalid_argument otherwise.
KinematicSignals body_frame_kinematics(const AgentTrack& track, double dt, int history_len);

// Number of timesteps whose signal magnitudes exceed the thresholds under the
// configured combiner.
int comfort_violation_count(const KinematicSignals& signals, const ComfortThresholds& thresholds);

}  // namespace scenaug
