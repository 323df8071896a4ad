#include "scenaug/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "scenaug/errors.hpp"
#include "scenaug/random.hpp"

namespace scenaug {
namespace {

// Lane bands, one agent kind per band so labeled counts cannot interact:
//   y = -16 ramps | -12 cubics | -8 turner orbits | -4/+4 cruisers,
//   stationary | 0 ego | +8 tailgaters | +16 violators.
// Parked vehicles sit at y = -21, outside the drivable band [-19, 19].
constexpr double kLaneW = 4.0;
constexpr double kVehicleLen = 4.5;
constexpr double kVehicleWid = 2.0;
constexpr double kDrivableYLo = -19.0;
constexpr double kDrivableYHi = 19.0;

double q(double v, double grain, bool on) { return on ? std::round(v / grain) * grain : v; }

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Square wave with period 4: +,+,-,-.
int sigma(int t) { return t % 4 < 2 ? 1 : -1; }

struct SceneBuilder {
  const GeneratorSpec& spec;
  SceneRecord& scene;
  double x0 = 0.0;

  AgentState state(Vec2 pos, double heading, Vec2 vel) const {
    AgentState s;
    s.position = {q(pos.x, 1e-3, spec.quantize), q(pos.y, 1e-3, spec.quantize)};
    // Re-wrap: rounding a heading just below pi can push it past the bound.
    s.heading = wrap_angle(q(heading, 1e-6, spec.quantize));
    s.velocity = {q(vel.x, 1e-3, spec.quantize), q(vel.y, 1e-3, spec.quantize)};
    s.length = kVehicleLen;
    s.width = kVehicleWid;
    s.observed = true;
    return s;
  }

  template <typename StateFn>
  AgentTrack track(const std::string& id, AgentCategory category, StateFn&& fn) const {
    AgentTrack tr;
    tr.agent_id = id;
    tr.category = category;
    const int horizon = spec.history_len + spec.future_len;
    tr.states.reserve(horizon);
    for (int t = 0; t < horizon; ++t) fn(tr, t);
    return tr;
  }

  void label(const char* metric, const std::string& id, const std::string& value) const {
    scene.context["gt." + std::string(metric) + "." + id] = value;
  }
};

}  // namespace

CorpusHeader synthetic_header(const GeneratorSpec& spec) {
  CorpusHeader header;
  header.dt = spec.dt;
  header.history_len = spec.history_len;
  header.future_len = spec.future_len;
  header.tags = {{"source", "synthetic"}};
  return header;
}

SceneRecord generate_scene(const GeneratorSpec& spec, int scene_index) {
  if (spec.history_len < 4 || spec.future_len < 0 || !(spec.dt > 0.0)) {
    throw ConfigError("generator: need history_len >= 4, future_len >= 0, dt > 0");
  }
  SceneRecord scene;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "synth-%06d", scene_index);
    scene.scene_id = buf;
  }
  scene.dt = spec.dt;
  scene.history_len = spec.history_len;
  scene.future_len = spec.future_len;

  RandomStream stream = derive_stream(spec.seed, "gen:" + std::to_string(scene_index));
  SceneBuilder b{spec, scene, 5.0 * stream.next_double()};
  const double dt = spec.dt;
  const double t_end = dt * (spec.history_len - 1);
  const double x0 = b.x0;

  scene.ego = b.track("ego", AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
    const double tau = dt * t;
    tr.states.push_back(b.state({x0 + spec.ego_speed * tau, 0.0}, 0.0, {spec.ego_speed, 0.0}));
  });

  // Cruisers (and flickering cruisers in the continuation slots) alternate
  // between the two lanes adjacent to the ego, matching its speed so every
  // relative distance is constant.
  for (int i = 0; i < spec.cruisers + spec.flickering; ++i) {
    const bool flicker = i >= spec.cruisers;
    const std::string id =
        flicker ? "flicker-" + std::to_string(i - spec.cruisers) : "cruiser-" + std::to_string(i);
    const double y = i % 2 == 0 ? -kLaneW : kLaneW;
    const double xs = x0 - 8.0 + 5.0 * i;
    const int blank_lo = spec.history_len + 5;
    const int blank_hi = spec.history_len + 10;
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      if (flicker && t >= blank_lo && t < blank_hi) {
        tr.states.emplace_back();  // unobserved, zeroed
        return;
      }
      const double tau = dt * t;
      tr.states.push_back(
          b.state({xs + spec.cruiser_speed * tau, y}, 0.0, {spec.cruiser_speed, 0.0}));
    }));
    b.label("h", id, format_double(0.0));
    b.label("d", id, format_double(spec.cruiser_speed * t_end));
  }

  for (int j = 0; j < spec.turners; ++j) {
    const std::string id = "turner-" + std::to_string(j);
    const double omega = spec.turner_yaw_rate;
    const double radius = spec.turner_speed / std::abs(omega);
    const Vec2 center{x0 + 6.0 + 10.0 * j, -2.0 * kLaneW};
    const double a0 = 2.0 * kPi * stream.next_double();
    const double quarter = omega >= 0.0 ? 0.5 * kPi : -0.5 * kPi;
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      const double a = a0 + omega * dt * t;
      const Vec2 pos = center + Vec2{radius * std::cos(a), radius * std::sin(a)};
      const Vec2 vel = Vec2{-std::sin(a), std::cos(a)} * (radius * omega);
      tr.states.push_back(b.state(pos, wrap_angle(a + quarter), vel));
    }));
    b.label("h", id, format_double(std::abs(omega) * dt * (spec.history_len - 1)));
    b.label("d", id, format_double(2.0 * radius * std::abs(std::sin(0.5 * omega * t_end))));
  }

  for (int k = 0; k < spec.ramps; ++k) {
    const std::string id = "ramp-" + std::to_string(k);
    const double xs = x0 - 10.0 * k;
    const double u0 = 1.0;
    const double acc = spec.ramp_accel;
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      const double tau = dt * t;
      tr.states.push_back(b.state({xs + u0 * tau + 0.5 * acc * tau * tau, -4.0 * kLaneW}, 0.0,
                                  {u0 + acc * tau, 0.0}));
    }));
    b.label("h", id, format_double(0.0));
    b.label("d", id, format_double(u0 * t_end + 0.5 * acc * t_end * t_end));
    b.label("alon", id, format_double(acc));
  }

  for (int k = 0; k < spec.cubics; ++k) {
    const std::string id = "cubic-" + std::to_string(k);
    const double xs = x0 - 30.0 - 10.0 * k;
    const double k0 = 1.0, k1 = 0.3, k2 = -0.02;  // speed polynomial
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      const double tau = dt * t;
      const double x = xs + k0 * tau + 0.5 * k1 * tau * tau + k2 * tau * tau * tau / 3.0;
      tr.states.push_back(
          b.state({x, -3.0 * kLaneW}, 0.0, {k0 + k1 * tau + k2 * tau * tau, 0.0}));
    }));
    b.label("h", id, format_double(0.0));
    b.label("d", id,
            format_double(k0 * t_end + 0.5 * k1 * t_end * t_end + k2 * std::pow(t_end, 3) / 3.0));
    b.label("vpoly", id, format_double(k0) + " " + format_double(k1) + " " + format_double(k2));
  }

  // Every derivative the comfort chain can take of the +,+,-,- square wave
  // has magnitude >= amp/dt (or amp/dt^2), so with amp/dt far above the
  // thresholds every history timestep violates all six bounds at once.
  for (int k = 0; k < spec.violators; ++k) {
    const std::string id = "violator-" + std::to_string(k);
    const double xs = x0 + 5.0 + 15.0 * k;
    const double base = spec.cruiser_speed;
    const double amp = spec.violator_amp;
    const double yaw_amp = spec.violator_yaw_amp;
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      const double tau = dt * t;
      const double s = sigma(t);
      const double heading = yaw_amp * s;
      const Vec2 body_vel{base + amp * s, amp * s};
      const double c = std::cos(heading), sn = std::sin(heading);
      const Vec2 world_vel{c * body_vel.x - sn * body_vel.y, sn * body_vel.x + c * body_vel.y};
      tr.states.push_back(b.state({xs + base * tau, 4.0 * kLaneW}, heading, world_vel));
    }));
    int transitions = 0;
    for (int t = 1; t < spec.history_len; ++t) {
      if (sigma(t) != sigma(t - 1)) ++transitions;
    }
    b.label("h", id, format_double(2.0 * yaw_amp * transitions));
    b.label("d", id, format_double(base * t_end));
    b.label("v_comf", id, std::to_string(spec.history_len));
  }

  for (int p = 0; p < spec.tailgater_pairs; ++p) {
    const std::string leader_id = "leader-" + std::to_string(p);
    const std::string follower_id = "follower-" + std::to_string(p);
    const double xl = x0 + 5.0 + 30.0 * p;
    const double xf = xl - kVehicleLen - spec.initial_gap;
    const double ul = spec.leader_speed;
    const double uf = ul + spec.closing_speed;
    const double y = 2.0 * kLaneW;
    scene.agents.push_back(b.track(leader_id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
      tr.states.push_back(b.state({xl + ul * dt * t, y}, 0.0, {ul, 0.0}));
    }));
    scene.agents.push_back(
        b.track(follower_id, AgentCategory::Vehicle, [&](AgentTrack& tr, int t) {
          tr.states.push_back(b.state({xf + uf * dt * t, y}, 0.0, {uf, 0.0}));
        }));
    b.label("h", leader_id, format_double(0.0));
    b.label("d", leader_id, format_double(ul * t_end));
    b.label("h", follower_id, format_double(0.0));
    b.label("d", follower_id, format_double(uf * t_end));
    // Closed-form gap walk; threshold crossings sit half a step away from
    // the sampling grid (initial_gap defaults keep it that way).
    int ttc_violations = 0;
    for (int t = 0; t < spec.history_len; ++t) {
      const double gap = spec.initial_gap - spec.closing_speed * dt * t;
      if (gap > 0.0 && gap / spec.closing_speed < 1.0) ++ttc_violations;
    }
    b.label("v_ttc", follower_id, std::to_string(ttc_violations));
  }

  for (int s = 0; s < spec.stationary; ++s) {
    const std::string id = "stationary-" + std::to_string(s);
    const Vec2 pos{x0 - 16.0 - 6.0 * s, -kLaneW};
    scene.agents.push_back(b.track(id, AgentCategory::Vehicle, [&](AgentTrack& tr, int) {
      tr.states.push_back(b.state(pos, 0.0, {0.0, 0.0}));
    }));
    b.label("h", id, format_double(0.0));
    b.label("d", id, format_double(0.0));
  }

  for (int k = 0; k < spec.parked; ++k) {
    const Vec2 pos{x0 + 3.0 + 6.0 * k, kDrivableYLo - 2.0};
    scene.agents.push_back(b.track("parked-" + std::to_string(k), AgentCategory::Vehicle,
                                   [&](AgentTrack& tr, int) {
                                     tr.states.push_back(b.state(pos, 0.0, {0.0, 0.0}));
                                   }));
  }

  for (int k = 0; k < spec.pedestrians; ++k) {
    const double xs = x0 + 15.0 + 3.0 * k;
    scene.agents.push_back(b.track("ped-" + std::to_string(k), AgentCategory::Pedestrian,
                                   [&](AgentTrack& tr, int t) {
                                     AgentState s = b.state({xs, -1.0 + 1.0 * dt * t},
                                                            0.5 * kPi, {0.0, 1.0});
                                     s.length = 0.6;
                                     s.width = 0.6;
                                     tr.states.push_back(s);
                                   }));
  }

  scene.drivable.polygons.push_back({{x0 - 60.0, kDrivableYLo},
                                     {x0 + 100.0, kDrivableYLo},
                                     {x0 + 100.0, kDrivableYHi},
                                     {x0 - 60.0, kDrivableYHi}});
  for (double y : {-16.0, -12.0, -8.0, -4.0, 0.0, 4.0, 8.0, 16.0}) {
    std::vector<Vec2> line;
    for (int i = 0; i < 4; ++i) {
      line.push_back({x0 - 60.0 + 160.0 * i / 3.0, y});
    }
    scene.drivable.polylines.push_back(std::move(line));
  }
  scene.obstacles.push_back({{x0 + 10.0, kDrivableYLo + 0.2}, 0.0, 1.0, 1.0});

  return scene;
}

std::vector<SceneRecord> generate_corpus(const GeneratorSpec& spec) {
  std::vector<SceneRecord> scenes;
  scenes.reserve(spec.scenes);
  for (int i = 0; i < spec.scenes; ++i) scenes.push_back(generate_scene(spec, i));
  return scenes;
}

void write_synthetic_corpus(const GeneratorSpec& spec, const std::string& path) {
  CorpusWriter writer(path, synthetic_header(spec));
  for (int i = 0; i < spec.scenes; ++i) {
    writer.write_scene(generate_scene(spec, i));
  }
  writer.commit();
}

}  // namespace scenaug
