// Candidate pools: which agents may stand in for the ego, and which survive
// the optional quality filters.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scenaug/interaction.hpp"
#include "scenaug/kinematics.hpp"
#include "scenaug/scenario.hpp"

namespace scenaug {

enum class ObservabilityWindow { HistoryOnly, HistoryAndFuture };

struct FilterSet {
  bool displacement = false;
  bool comfort = false;
  bool ttc = false;

  bool any() const { return displacement || comfort || ttc; }
};

struct FilterConfig {
  double radius = 50.0;             // m, max distance to ego at every timestep
  FilterSet active;                 // which quality filters apply
  double min_displacement = 3.0;    // m
  int max_comfort_violations = 5;
  int max_ttc_violations = 0;
  ObservabilityWindow window = ObservabilityWindow::HistoryAndFuture;
};

struct CandidateScore {
  std::string agent_id;
  double heading_deviation = 0.0;  // rad, sampling weight input
  double displacement = 0.0;       // m
  int comfort_violations = 0;
  int ttc_violations = 0;
  bool eligible = false;
  bool passes_filters = false;  // implies eligible
};

// Selects which of the score parts are computed; skipping the expensive ones
// leaves their fields zero.
struct ScoreParts {
  bool comfort = true;
  bool ttc = true;
};

// Point-in-union test over the drivable polygons, even-odd rule, boundary
// points count as inside.
bool point_in_drivable(const DrivableMap& map, const Vec2& point);

// Vehicle agents observed over the configured window that stay within
// cfg.radius of the ego and on the drivable area at every window timestep.
// Sorted by agent_id; the ego itself is never a candidate.
std::vector<std::string> eligible_pool(const SceneRecord& scene, const FilterConfig& cfg);

// Metric scores for each pool member.
std::map<std::string, CandidateScore> score_candidates(const SceneRecord& scene,
                                                       const std::vector<std::string>& pool,
                                                       const ComfortThresholds& comfort_cfg,
                                                       const TtcConfig& ttc_cfg,
                                                       const ScoreParts& parts = {});

// Pool members whose scores satisfy every active filter. Marks
// passes_filters in `scores`. With no active filters this is the pool itself.
std::vector<std::string> filtered_pool(const std::vector<std::string>& pool,
                                       std::map<std::string, CandidateScore>& scores,
                                       const FilterConfig& cfg);

// Fixed columns: scene_id,agent_id,heading_deviation,displacement,
// comfort_violations,ttc_violations,eligible,passes_filters.
void append_scores_csv(std::string& out, const std::string& scene_id,
                       const std::map<std::string, CandidateScore>& scores);
std::string scores_csv_header();

}  // namespace scenaug
