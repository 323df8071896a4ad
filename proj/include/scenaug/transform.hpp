// Re-centering a scene on a selected agent: rigid re-expression of every
// track, obstacle, and map element in the agent's frame.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenaug/geometry.hpp"
#include "scenaug/sampler.hpp"
#include "scenaug/scenario.hpp"

namespace scenaug {

// World -> agent frame at this state: the state's pose maps to the origin
// with zero heading.
RigidTransform2D se2_from_state(const AgentState& state);

// Deterministic id for the derived scene.
std::string augmented_scene_id(std::string_view source_scene_id, std::string_view agent_id);

// Scene re-expressed through `transform` with `agent_id` promoted to ego.
// The selected agent must exist and be observed over the whole horizon
// (DataError otherwise). The former ego is demoted to a regular agent unless
// keep_original_ego is false. Positions/headings/velocities of observed
// states transform rigidly; unobserved states stay zeroed; bounding boxes,
// categories, timing, and context are preserved. Provenance records the
// source scene and agent.
SceneRecord transform_scene(const SceneRecord& scene, const std::string& agent_id,
                            const RigidTransform2D& transform, bool keep_original_ego = true);

// One augmented scene per plan selection, anchored at the agent's last
// history state, ordered by (scene, draw). plans[i] must describe scenes[i].
std::vector<SceneRecord> augment_dataset(std::span<const SceneRecord> scenes,
                                         std::span<const ScenePlan> plans,
                                         bool keep_original_ego = true);

}  // namespace scenaug
