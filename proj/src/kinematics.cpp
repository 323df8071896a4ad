#include "scenaug/kinematics.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "scenaug/geometry.hpp"

namespace scenaug {
namespace {

void require_history(const AgentTrack& track, int history_len, int min_len, const char* op) {
  if (history_len < min_len) {
    throw std::invalid_argument(std::string(op) + ": history_len must be >= " +
                                std::to_string(min_len));
  }
  if (static_cast<int>(track.states.size()) < history_len) {
    throw std::invalid_argument(std::string(op) + ": track '" + track.agent_id +
                                "' shorter than history_len");
  }
  for (int t = 0; t < history_len; ++t) {
    if (!track.states[t].observed) {
      throw std::invalid_argument(std::string(op) + ": track '" + track.agent_id +
                                  "' unobserved at history step " + std::to_string(t));
    }
  }
}

// d/dt with second-order stencils: central inside, one-sided at the ends.
// Exact for quadratics, so jerk of a cubic position profile survives two
// applications unchanged.
std::vector<double> differentiate(std::span<const double> f, double dt) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
  for (std::size_t t = 1; t + 1 < n; ++t) {
    d[t] = (f[t + 1] - f[t - 1]) / (2.0 * dt);
  }
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
  return d;
}

// Same stencils expressed over wrapped per-step heading deltas, so the
// derivative never sees a 2*pi jump.
std::vector<double> differentiate_wrapped(std::span<const double> theta, double dt) {
  const std::size_t n = theta.size();
  std::vector<double> step(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    step[t] = wrapped_heading_delta(theta[t + 1], theta[t]);
  }
  std::vector<double> d(n);
  d[0] = (3.0 * step[0] - step[1]) / (2.0 * dt);
  for (std::size_t t = 1; t + 1 < n; ++t) {
    d[t] = (step[t - 1] + step[t]) / (2.0 * dt);
  }
  d[n - 1] = (3.0 * step[n - 2] - step[n - 3]) / (2.0 * dt);
  return d;
}

}  // namespace

double heading_deviation_sum(const AgentTrack& track, int history_len) {
  require_history(track, history_len, 2, "heading_deviation_sum");
  double sum = 0.0;
  for (int t = 1; t < history_len; ++t) {
    sum += std::abs(wrapped_heading_delta(track.states[t].heading, track.states[t - 1].heading));
  }
  return sum;
}

double displacement(const AgentTrack& track, int history_len) {
  require_history(track, history_len, 2, "displacement");
  return distance(track.states[history_len - 1].position, track.states[0].position);
}

KinematicSignals body_frame_kinematics(const AgentTrack& track, double dt, int history_len) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("body_frame_kinematics: dt must be positive");
  }
  require_history(track, history_len, 4, "body_frame_kinematics");

  const std::size_t n = static_cast<std::size_t>(history_len);
  std::vector<double> u_lon(n);
  std::vector<double> u_lat(n);
  std::vector<double> theta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const AgentState& s = track.states[t];
    const double c = std::cos(s.heading);
    const double sn = std::sin(s.heading);
    u_lon[t] = c * s.velocity.x + sn * s.velocity.y;
    u_lat[t] = -sn * s.velocity.x + c * s.velocity.y;
    theta[t] = s.heading;
  }

  KinematicSignals out;
  out.accel_lon = differentiate(u_lon, dt);
  out.accel_lat = differentiate(u_lat, dt);
  out.jerk_lon = differentiate(out.accel_lon, dt);
  out.jerk_lat = differentiate(out.accel_lat, dt);
  out.yaw_rate = differentiate_wrapped(theta, dt);
  out.yaw_accel = differentiate(out.yaw_rate, dt);
  return out;
}

int comfort_violation_count(const KinematicSignals& signals, const ComfortThresholds& thresholds) {
  const std::size_t n = signals.accel_lon.size();
  int count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const bool over[6] = {
        std::abs(signals.accel_lon[t]) > thresholds.max_accel_lon,
        std::abs(signals.accel_lat[t]) > thresholds.max_accel_lat,
        std::abs(signals.jerk_lon[t]) > thresholds.max_jerk_lon,
        std::abs(signals.jerk_lat[t]) > thresholds.max_jerk_lat,
        std::abs(signals.yaw_rate[t]) > thresholds.max_yaw_rate,
        std::abs(signals.yaw_accel[t]) > thresholds.max_yaw_accel,
    };
    bool hit;
    if (thresholds.combiner == ComfortCombiner::AllConditions) {
      hit = over[0] && over[1] && over[2] && over[3] && over[4] && over[5];
    } else {
      hit = over[0] || over[1] || over[2] || over[3] || over[4] || over[5];
    }
    count += hit ? 1 : 0;
  }
  return count;
}

}  // namespace scenaug
