#include "scenaug/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace scenaug {
namespace {

bool finite2(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += poly[i].cross(poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = (b - a).cross(c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return orientation(a, b, p) == 0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  int o1 = orientation(p1, p2, q1);
  int o2 = orientation(p1, p2, q2);
  int o3 = orientation(q1, q2, p1);
  int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

// Non-adjacent edge pairs must not touch; adjacent edges share exactly their
// common vertex by construction.
bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

void check_track(const AgentTrack& track, const std::string& label, int horizon,
                 std::vector<Violation>& out) {
  if (static_cast<int>(track.states.size()) != horizon) {
    out.push_back({"track_length_mismatch", label});
  }
  for (std::size_t t = 0; t < track.states.size(); ++t) {
    const AgentState& s = track.states[t];
    if (!s.observed) continue;
    const std::string where = label + ".states[" + std::to_string(t) + "]";
    if (!finite2(s.position) || !finite2(s.velocity) || !std::isfinite(s.heading) ||
        !std::isfinite(s.length) || !std::isfinite(s.width)) {
      out.push_back({"nonfinite_state", where});
      continue;
    }
    if (!(s.heading > -kPi && s.heading <= kPi)) {
      out.push_back({"heading_out_of_range", where});
    }
    if (s.length <= 0.0 || s.width <= 0.0) {
      out.push_back({"nonpositive_bbox", where});
    }
  }
}

}  // namespace

const char* to_string(AgentCategory c) {
  switch (c) {
    case AgentCategory::Vehicle: return "vehicle";
    case AgentCategory::Pedestrian: return "pedestrian";
    case AgentCategory::Bicycle: return "bicycle";
    case AgentCategory::Static: return "static";
  }
  return "vehicle";
}

bool category_from_string(std::string_view s, AgentCategory* out) {
  if (s == "vehicle") *out = AgentCategory::Vehicle;
  else if (s == "pedestrian") *out = AgentCategory::Pedestrian;
  else if (s == "bicycle") *out = AgentCategory::Bicycle;
  else if (s == "static") *out = AgentCategory::Static;
  else return false;
  return true;
}

ValidationReport validate_scene(const SceneRecord& scene) {
  ValidationReport report;
  auto& v = report.violations;

  if (!(scene.dt > 0.0) || !std::isfinite(scene.dt)) {
    v.push_back({"nonpositive_timestep", "dt"});
  }
  if (scene.history_len < 2) {
    v.push_back({"history_too_short", "history_len"});
  }
  if (scene.future_len < 0) {
    v.push_back({"negative_future", "future_len"});
  }
  if (scene.scene_id.empty()) {
    v.push_back({"empty_scene_id", "scene_id"});
  }

  check_track(scene.ego, "ego", scene.horizon(), v);
  for (const AgentState& s : scene.ego.states) {
    if (!s.observed) {
      v.push_back({"ego_unobserved", "ego"});
      break;
    }
  }

  std::set<std::string> ids{scene.ego.agent_id};
  for (std::size_t k = 0; k < scene.agents.size(); ++k) {
    const std::string label = "agents[" + std::to_string(k) + "]";
    check_track(scene.agents[k], label, scene.horizon(), v);
    if (!ids.insert(scene.agents[k].agent_id).second) {
      v.push_back({"duplicate_agent_id", label});
    }
  }

  for (std::size_t k = 0; k < scene.obstacles.size(); ++k) {
    const StaticObstacle& o = scene.obstacles[k];
    if (!finite2(o.position) || !std::isfinite(o.heading) || !std::isfinite(o.length) ||
        !std::isfinite(o.width)) {
      v.push_back({"nonfinite_obstacle", "obstacles[" + std::to_string(k) + "]"});
    }
  }

  for (std::size_t k = 0; k < scene.drivable.polygons.size(); ++k) {
    const auto& poly = scene.drivable.polygons[k];
    const std::string where = "drivable.polygons[" + std::to_string(k) + "]";
    bool finite = std::all_of(poly.begin(), poly.end(), finite2);
    if (poly.size() < 3 || !finite || polygon_area(poly) <= 0.0) {
      v.push_back({"degenerate_polygon", where});
      continue;
    }
    if (!polygon_is_simple(poly)) {
      v.push_back({"self_intersecting_polygon", where});
    }
  }

  return report;
}

std::span<const AgentState> history_window(const AgentTrack& track, const SceneRecord& scene) {
  const auto len = static_cast<std::size_t>(scene.history_len);
  if (track.states.size() < len) {
    throw std::invalid_argument("history_window: track '" + track.agent_id +
                                "' shorter than history_len");
  }
  return {track.states.data(), len};
}

bool fully_observed(const AgentTrack& track, int history_len, bool whole_horizon) {
  const std::size_t end = whole_horizon ? track.states.size()
                                        : std::min<std::size_t>(track.states.size(), history_len);
  if (static_cast<int>(track.states.size()) < history_len) return false;
  for (std::size_t t = 0; t < end; ++t) {
    if (!track.states[t].observed) return false;
  }
  return true;
}

}  // namespace scenaug
