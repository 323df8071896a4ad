#include "scenaug/eligibility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace scenaug {
namespace {

// Even-odd ray cast, +x direction. A point on an edge counts as inside.
bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[i];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross == 0.0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
        p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y)) {
      return true;  // boundary
    }
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

bool point_in_drivable(const DrivableMap& map, const Vec2& point) {
  for (const auto& poly : map.polygons) {
    if (poly.size() >= 3 && point_in_polygon(poly, point)) return true;
  }
  return false;
}

std::vector<std::string> eligible_pool(const SceneRecord& scene, const FilterConfig& cfg) {
  const bool need_future = cfg.window == ObservabilityWindow::HistoryAndFuture;
  const int window_len = need_future ? scene.horizon() : scene.history_len;
  const double r2 = cfg.radius * cfg.radius;

  std::vector<std::string> pool;
  if (static_cast<int>(scene.ego.states.size()) < window_len) return pool;
  for (const AgentTrack& agent : scene.agents) {
    if (agent.category != AgentCategory::Vehicle) continue;
    if (static_cast<int>(agent.states.size()) < window_len) continue;
    bool ok = true;
    for (int t = 0; t < window_len && ok; ++t) {
      const AgentState& s = agent.states[t];
      const AgentState& ego = scene.ego.states[t];
      ok = s.observed && (s.position - ego.position).squared_norm() <= r2 &&
           point_in_drivable(scene.drivable, s.position);
    }
    if (ok) pool.push_back(agent.agent_id);
  }
  // Pool order is part of the sampling contract; ids, not scene order.
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::map<std::string, CandidateScore> score_candidates(const SceneRecord& scene,
                                                       const std::vector<std::string>& pool,
                                                       const ComfortThresholds& comfort_cfg,
                                                       const TtcConfig& ttc_cfg,
                                                       const ScoreParts& parts) {
  std::map<std::string, CandidateScore> scores;
  for (const std::string& id : pool) {
    auto it = std::find_if(scene.agents.begin(), scene.agents.end(),
                           [&](const AgentTrack& a) { return a.agent_id == id; });
    if (it == scene.agents.end()) continue;
    CandidateScore score;
    score.agent_id = id;
    score.eligible = true;
    score.heading_deviation = heading_deviation_sum(*it, scene.history_len);
    score.displacement = displacement(*it, scene.history_len);
    if (parts.comfort) {
      score.comfort_violations = comfort_violation_count(
          body_frame_kinematics(*it, scene.dt, scene.history_len), comfort_cfg);
    }
    if (parts.ttc) {
      score.ttc_violations = ttc_violation_count(scene, *it, ttc_cfg);
    }
    scores.emplace(id, std::move(score));
  }
  return scores;
}

std::vector<std::string> filtered_pool(const std::vector<std::string>& pool,
                                       std::map<std::string, CandidateScore>& scores,
                                       const FilterConfig& cfg) {
  std::vector<std::string> out;
  for (const std::string& id : pool) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw std::invalid_argument("filtered_pool: missing score for pool member '" + id + "'");
    }
    CandidateScore& s = it->second;
    bool pass = true;
    if (cfg.active.displacement) pass = pass && s.displacement >= cfg.min_displacement;
    if (cfg.active.comfort) pass = pass && s.comfort_violations <= cfg.max_comfort_violations;
    if (cfg.active.ttc) pass = pass && s.ttc_violations <= cfg.max_ttc_violations;
    s.passes_filters = pass;
    if (pass) out.push_back(id);
  }
  return out;
}

std::string scores_csv_header() {
  return "scene_id,agent_id,heading_deviation,displacement,comfort_violations,ttc_violations,"
         "eligible,passes_filters\n";
}

void append_scores_csv(std::string& out, const std::string& scene_id,
                       const std::map<std::string, CandidateScore>& scores) {
  for (const auto& [id, s] : scores) {
    out += scene_id;
    out += ',';
    out += id;
    out += ',';
    append_double(out, s.heading_deviation);
    out += ',';
    append_double(out, s.displacement);
    out += ',';
    out += std::to_string(s.comfort_violations);
    out += ',';
    out += std::to_string(s.ttc_violations);
    out += ',';
    out += s.eligible ? '1' : '0';
    out += ',';
    out += s.passes_filters ? '1' : '0';
    out += '\n';
  }
}

}  // namespace scenaug
