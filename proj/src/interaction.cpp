#include "scenaug/interaction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "scenaug/eligibility.hpp"
#include "scenaug/geometry.hpp"

namespace scenaug {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ViolationAggregate aggregate(const std::vector<AgentViolations>& rows) {
  ViolationAggregate agg;
  agg.count = rows.size();
  if (rows.empty()) return agg;
  std::vector<double> ttc, comfort;
  ttc.reserve(rows.size());
  comfort.reserve(rows.size());
  for (const AgentViolations& r : rows) {
    ttc.push_back(r.ttc);
    comfort.push_back(r.comfort);
    agg.mean_ttc += r.ttc;
    agg.mean_comfort += r.comfort;
  }
  agg.mean_ttc /= rows.size();
  agg.mean_comfort /= rows.size();
  agg.median_ttc = median_of(std::move(ttc));
  agg.median_comfort = median_of(std::move(comfort));
  return agg;
}

}  // namespace

LongitudinalGeometry longitudinal_geometry(const AgentState& a, const AgentState& b) {
  const Vec2 axis{std::cos(a.heading), std::sin(a.heading)};
  const Vec2 rel = b.position - a.position;
  LongitudinalGeometry g;
  const double along = axis.dot(rel);
  g.gap = along - 0.5 * a.length - 0.5 * b.length;
  g.lateral_offset = axis.cross(rel);
  g.closing_speed = axis.dot(a.velocity) - axis.dot(b.velocity);
  return g;
}

double ttc_pair(const AgentState& a, const AgentState& b, const TtcConfig& cfg) {
  const LongitudinalGeometry g = longitudinal_geometry(a, b);
  if (std::abs(g.lateral_offset) > 0.5 * (a.width + b.width) + cfg.lateral_margin) {
    return kInf;
  }
  if (!(g.gap > 0.0) || !(g.closing_speed > 0.0)) {
    return kInf;
  }
  return g.gap / std::max(cfg.epsilon, g.closing_speed);
}

int ttc_violation_count(const SceneRecord& scene, const AgentTrack& agent, const TtcConfig& cfg) {
  const double r2 = cfg.prefilter_radius > 0.0
                        ? cfg.prefilter_radius * cfg.prefilter_radius
                        : kInf;
  int count = 0;
  const int steps = std::min<int>(scene.history_len, static_cast<int>(agent.states.size()));
  for (int t = 0; t < steps; ++t) {
    const AgentState& self = agent.states[t];
    if (!self.observed) continue;
    double min_ttc = kInf;
    auto consider = [&](const AgentTrack& other) {
      if (other.agent_id == agent.agent_id) return;
      if (static_cast<std::size_t>(t) >= other.states.size()) return;
      const AgentState& os = other.states[t];
      if (!os.observed) return;
      if ((os.position - self.position).squared_norm() > r2) return;
      min_ttc = std::min(min_ttc, ttc_pair(self, os, cfg));
    };
    consider(scene.ego);
    for (const AgentTrack& other : scene.agents) consider(other);
    if (min_ttc < cfg.threshold) ++count;
  }
  return count;
}

SceneViolations scene_violation_rows(const SceneRecord& scene,
                                     const ComfortThresholds& comfort_cfg,
                                     const TtcConfig& ttc_cfg,
                                     const FilterConfig& filter_cfg) {
  SceneViolations sv;
  sv.scene_id = scene.scene_id;
  sv.ego.agent_id = scene.ego.agent_id;
  sv.ego.ttc = ttc_violation_count(scene, scene.ego, ttc_cfg);
  sv.ego.comfort = comfort_violation_count(
      body_frame_kinematics(scene.ego, scene.dt, scene.history_len), comfort_cfg);

  for (const std::string& id : eligible_pool(scene, filter_cfg)) {
    auto it = std::find_if(scene.agents.begin(), scene.agents.end(),
                           [&](const AgentTrack& a) { return a.agent_id == id; });
    AgentViolations row;
    row.agent_id = id;
    row.ttc = ttc_violation_count(scene, *it, ttc_cfg);
    row.comfort = comfort_violation_count(
        body_frame_kinematics(*it, scene.dt, scene.history_len), comfort_cfg);
    sv.others.push_back(std::move(row));
  }
  return sv;
}

ViolationAggregate aggregate_violations(const std::vector<AgentViolations>& rows) {
  return aggregate(rows);
}

ViolationReport ego_vs_others_report(std::span<const SceneRecord> scenes,
                                     const ComfortThresholds& comfort_cfg,
                                     const TtcConfig& ttc_cfg,
                                     const FilterConfig& filter_cfg) {
  ViolationReport report;
  std::vector<AgentViolations> all_ego, all_others;
  for (const SceneRecord& scene : scenes) {
    SceneViolations sv = scene_violation_rows(scene, comfort_cfg, ttc_cfg, filter_cfg);
    all_ego.push_back(sv.ego);
    all_others.insert(all_others.end(), sv.others.begin(), sv.others.end());
    report.scenes.push_back(std::move(sv));
  }
  // Row order is part of the serialized contract, independent of input order.
  std::stable_sort(report.scenes.begin(), report.scenes.end(),
                   [](const SceneViolations& a, const SceneViolations& b) {
                     return a.scene_id < b.scene_id;
                   });
  report.ego = aggregate(all_ego);
  report.others = aggregate(all_others);
  return report;
}

std::string violation_report_csv(const ViolationReport& report) {
  std::string out = "scene_id,agent_id,role,ttc_violations,comfort_violations\n";
  for (const SceneViolations& sv : report.scenes) {
    auto row = [&](const AgentViolations& a, const char* role) {
      out += sv.scene_id;
      out += ',';
      out += a.agent_id;
      out += ',';
      out += role;
      out += ',';
      out += std::to_string(a.ttc);
      out += ',';
      out += std::to_string(a.comfort);
      out += '\n';
    };
    row(sv.ego, "ego");
    for (const AgentViolations& a : sv.others) row(a, "other");
  }
  return out;
}

std::string violation_report_json(const ViolationReport& report) {
  auto group = [](const ViolationAggregate& g) {
    std::string s = "{\"count\":" + std::to_string(g.count);
    s += ",\"mean_ttc\":";
    append_double(s, g.mean_ttc);
    s += ",\"median_ttc\":";
    append_double(s, g.median_ttc);
    s += ",\"mean_comfort\":";
    append_double(s, g.mean_comfort);
    s += ",\"median_comfort\":";
    append_double(s, g.median_comfort);
    s += "}";
    return s;
  };
  return "{\"scenes\":" + std::to_string(report.scenes.size()) +
         ",\"ego\":" + group(report.ego) + ",\"others\":" + group(report.others) + "}\n";
}

}  // namespace scenaug
