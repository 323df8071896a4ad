// Closed-form synthetic corpora with ground-truth metric labels.
//
// Every generated motion follows an analytic profile, so the expected
// heading deviation, displacement, and violation counts are computed by
// formula at generation time and stored as context tags ("gt.h.<agent>",
// "gt.d.<agent>", "gt.v_comf.<agent>", "gt.v_ttc.<agent>"). Oracle tests
// compare pipeline output against these labels.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenaug/corpus_io.hpp"
#include "scenaug/scenario.hpp"

namespace scenaug {

// Agent mix per scene. The geometry keeps the groups non-interacting: each
// kind lives in its own lane band, so labeled counts stay exact.
struct GeneratorSpec {
  int scenes = 100;
  int cruisers = 3;         // constant velocity, ego speed, h = 0
  int turners = 1;          // constant yaw rate, h = |yaw_rate| * dt * (T_H - 1)
  int ramps = 0;            // linear speed ramp, constant accel probe
  int cubics = 0;           // cubic position / quadratic speed probe
  int violators = 0;        // alternating velocity pattern, all comfort bounds hit
  int tailgater_pairs = 0;  // closing pair, follower collects ttc violations
  int stationary = 0;       // parked on the roadway, zero displacement
  int parked = 0;           // parked outside the drivable area
  int pedestrians = 0;      // category excluded from pools
  int flickering = 0;       // cruiser with unobserved future steps

  double dt = 0.1;     // s
  int history_len = 21;
  int future_len = 80;

  double ego_speed = 2.0;        // m/s
  double cruiser_speed = 2.0;    // m/s
  double turner_speed = 2.0;     // m/s
  double turner_yaw_rate = 1.0;  // rad/s
  double ramp_accel = 1.2;       // m/s^2
  double leader_speed = 2.0;     // m/s
  double closing_speed = 2.0;    // m/s, follower excess over leader
  double initial_gap = 4.1;      // m, bumper to bumper at t = 0; keeps the
                                 // ttc threshold crossing off the time grid
  double violator_amp = 2.0;     // m/s, velocity square-wave amplitude
  double violator_yaw_amp = 0.2; // rad, heading square-wave amplitude

  // Round positions/velocities to 1e-3 and headings to 1e-6 before writing.
  // Shortens serialized numbers for large corpora; labels then hold only to
  // ~1e-3 instead of exactly.
  bool quantize = false;

  std::uint64_t seed = 0;
};

SceneRecord generate_scene(const GeneratorSpec& spec, int scene_index);
std::vector<SceneRecord> generate_corpus(const GeneratorSpec& spec);

CorpusHeader synthetic_header(const GeneratorSpec& spec);

// Streams scenes straight to disk; memory stays O(one scene).
void write_synthetic_corpus(const GeneratorSpec& spec, const std::string& path);

}  // namespace scenaug
