// Scene data model: agent tracks, drivable-area map, validation.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scenaug/geometry.hpp"

namespace scenaug {

// One agent at one timestep. When observed is false the numeric fields are
// zeroed by convention and carry no meaning.
struct AgentState {
  Vec2 position;          // m, world frame
  double heading = 0.0;   // rad, in (-pi, pi] when observed
  Vec2 velocity;          // m/s, world frame
  double length = 0.0;    // m, bounding box, along heading
  double width = 0.0;     // m, bounding box, across heading
  bool observed = false;
};

enum class AgentCategory { Vehicle, Pedestrian, Bicycle, Static };

const char* to_string(AgentCategory c);
bool category_from_string(std::string_view s, AgentCategory* out);

struct AgentTrack {
  std::string agent_id;
  AgentCategory category = AgentCategory::Vehicle;
  std::vector<AgentState> states;  // length history_len + future_len
};

struct StaticObstacle {
  Vec2 position;         // m, world frame
  double heading = 0.0;  // rad
  double length = 0.0;   // m
  double width = 0.0;    // m
};

// Drivable area as a union of simple polygons, plus lane-center polylines
// that are carried through transforms but not interpreted.
struct DrivableMap {
  std::vector<std::vector<Vec2>> polygons;
  std::vector<std::vector<Vec2>> polylines;
};

struct Provenance {
  bool augmented = false;
  std::string source_scene_id;  // empty for original scenes
  std::string source_agent_id;
};

struct SceneRecord {
  std::string scene_id;
  double dt = 0.1;      // s, uniform step
  int history_len = 0;  // timesteps 0 .. history_len-1 are history
  int future_len = 0;
  AgentTrack ego;
  std::vector<AgentTrack> agents;  // non-ego agents
  std::vector<StaticObstacle> obstacles;
  DrivableMap drivable;
  std::map<std::string, std::string> context;  // free-form tags
  Provenance provenance;

  int horizon() const { return history_len + future_len; }
};

struct Violation {
  std::string code;   // stable identifier, e.g. "track_length_mismatch"
  std::string where;  // location, e.g. "agents[3].states[7]"
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant and reports all violations, not just the
// first. Pure; the scene is not modified.
ValidationReport validate_scene(const SceneRecord& scene);

// First history_len states of a track. Throws std::invalid_argument if the
// track is shorter than the scene's history.
std::span<const AgentState> history_window(const AgentTrack& track, const SceneRecord& scene);

// True if states [0, history_len) are all observed; with whole_horizon also
// requires the future part.
bool fully_observed(const AgentTrack& track, int history_len, bool whole_horizon);

}  // namespace scenaug
