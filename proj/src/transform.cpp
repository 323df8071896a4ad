#include "scenaug/transform.hpp"

#include <algorithm>
#include <stdexcept>

#include "scenaug/errors.hpp"

namespace scenaug {
namespace {

AgentState transform_state(const AgentState& s, const RigidTransform2D& t) {
  if (!s.observed) return s;  // unobserved states stay zeroed
  AgentState out = s;
  out.position = t.apply(s.position);
  out.velocity = t.rotate(s.velocity);
  out.heading = t.apply_heading(s.heading);
  return out;
}

AgentTrack transform_track(const AgentTrack& track, const RigidTransform2D& t) {
  AgentTrack out;
  out.agent_id = track.agent_id;
  out.category = track.category;
  out.states.reserve(track.states.size());
  for (const AgentState& s : track.states) out.states.push_back(transform_state(s, t));
  return out;
}

}  // namespace

RigidTransform2D se2_from_state(const AgentState& state) {
  return RigidTransform2D::to_frame(state.position, state.heading);
}

std::string augmented_scene_id(std::string_view source_scene_id, std::string_view agent_id) {
  std::string id(source_scene_id);
  id += "#aug#";
  id += agent_id;
  return id;
}

SceneRecord transform_scene(const SceneRecord& scene, const std::string& agent_id,
                            const RigidTransform2D& transform, bool keep_original_ego) {
  const AgentTrack* selected = nullptr;
  if (scene.ego.agent_id == agent_id) {
    selected = &scene.ego;
  } else {
    auto it = std::find_if(scene.agents.begin(), scene.agents.end(),
                           [&](const AgentTrack& a) { return a.agent_id == agent_id; });
    if (it == scene.agents.end()) {
      throw DataError("transform_scene: scene '" + scene.scene_id + "' has no agent '" +
                      agent_id + "'");
    }
    selected = &*it;
  }
  if (!fully_observed(*selected, scene.history_len, /*whole_horizon=*/true)) {
    throw DataError("transform_scene: agent '" + agent_id + "' in scene '" + scene.scene_id +
                    "' is not observed over the whole horizon");
  }

  SceneRecord out;
  out.scene_id = augmented_scene_id(scene.scene_id, agent_id);
  out.dt = scene.dt;
  out.history_len = scene.history_len;
  out.future_len = scene.future_len;
  out.context = scene.context;
  out.provenance = {true, scene.scene_id, agent_id};

  out.ego = transform_track(*selected, transform);
  const bool promoted_ego = selected == &scene.ego;
  out.agents.reserve(scene.agents.size() + 1);
  for (const AgentTrack& agent : scene.agents) {
    if (&agent == selected) continue;
    out.agents.push_back(transform_track(agent, transform));
  }
  if (!promoted_ego && keep_original_ego) {
    out.agents.push_back(transform_track(scene.ego, transform));
  }

  out.obstacles.reserve(scene.obstacles.size());
  for (const StaticObstacle& o : scene.obstacles) {
    StaticObstacle t = o;
    t.position = transform.apply(o.position);
    t.heading = transform.apply_heading(o.heading);
    out.obstacles.push_back(t);
  }

  out.drivable.polygons.reserve(scene.drivable.polygons.size());
  for (const auto& poly : scene.drivable.polygons) {
    auto& tp = out.drivable.polygons.emplace_back();
    tp.reserve(poly.size());
    for (const Vec2& p : poly) tp.push_back(transform.apply(p));
  }
  out.drivable.polylines.reserve(scene.drivable.polylines.size());
  for (const auto& line : scene.drivable.polylines) {
    auto& tl = out.drivable.polylines.emplace_back();
    tl.reserve(line.size());
    for (const Vec2& p : line) tl.push_back(transform.apply(p));
  }
  return out;
}

std::vector<SceneRecord> augment_dataset(std::span<const SceneRecord> scenes,
                                         std::span<const ScenePlan> plans,
                                         bool keep_original_ego) {
  if (scenes.size() != plans.size()) {
    throw DataError("augment_dataset: plan count does not match scene count");
  }
  std::vector<SceneRecord> out;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const SceneRecord& scene = scenes[s];
    if (plans[s].scene_id != scene.scene_id) {
      throw DataError("augment_dataset: plan for '" + plans[s].scene_id +
                      "' paired with scene '" + scene.scene_id + "'");
    }
    for (std::size_t a = 0; a < plans[s].selected.size(); ++a) {
      for (std::size_t b = a + 1; b < plans[s].selected.size(); ++b) {
        if (plans[s].selected[a].agent_id == plans[s].selected[b].agent_id) {
          throw DataError("augment_dataset: duplicate selection '" +
                          plans[s].selected[a].agent_id + "' in scene '" + scene.scene_id + "'");
        }
      }
    }
    for (const Selection& sel : plans[s].selected) {
      const AgentTrack* agent = nullptr;
      for (const AgentTrack& a : scene.agents) {
        if (a.agent_id == sel.agent_id) {
          agent = &a;
          break;
        }
      }
      if (agent == nullptr && scene.ego.agent_id == sel.agent_id) agent = &scene.ego;
      if (agent == nullptr) {
        throw DataError("augment_dataset: plan selects missing agent '" + sel.agent_id +
                        "' in scene '" + scene.scene_id + "'");
      }
      if (static_cast<int>(agent->states.size()) < scene.history_len || scene.history_len < 1) {
        throw DataError("augment_dataset: agent '" + sel.agent_id + "' in scene '" +
                        scene.scene_id + "' has no anchor state");
      }
      const RigidTransform2D t = se2_from_state(agent->states[scene.history_len - 1]);
      out.push_back(transform_scene(scene, sel.agent_id, t, keep_original_ego));
    }
  }
  return out;
}

}  // namespace scenaug
