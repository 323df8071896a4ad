// Temperature softmax over heading-deviation weights and reproducible
// weighted sampling without replacement.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenaug/random.hpp"

namespace scenaug {

// Either a positive softmax temperature or the exact-uniform setting.
struct Temperature {
  double value = 0.5;    // ignored when uniform
  bool uniform = false;

  static Temperature of(double tau) { return {tau, false}; }
  static Temperature uniform_sampling() { return {0.0, true}; }
};

enum class SamplingMode { PerScene, PerEgo };

struct SamplingConfig {
  Temperature tau;
  int draws_per_scene = 1;  // per-scene mode only
  SamplingMode mode = SamplingMode::PerScene;
  std::uint64_t seed = 0;
};

struct Candidate {
  std::string agent_id;
  double weight = 0.0;  // heading deviation h, rad
};

struct SceneCandidates {
  std::string scene_id;
  std::vector<Candidate> pool;  // filtered pool, sorted by agent_id
};

struct Selection {
  std::string agent_id;
  double probability = 0.0;  // conditional probability at this draw
};

struct ScenePlan {
  std::string scene_id;
  std::size_t pool_size = 0;
  std::vector<Selection> selected;  // draw order

  bool skipped() const { return selected.empty(); }
};

// exp(w_i / tau) normalized over the input; uniform temperature yields
// exactly 1/n per entry. Shift-invariant and overflow-safe via max
// subtraction. Throws std::invalid_argument on an empty input, a
// non-positive/non-finite tau, or non-finite weights.
std::vector<double> softmax_weights(std::span<const double> weights, const Temperature& tau);

// Draws min(k, n) distinct indices. Exponential-keys method: index i gets
// key E_i / p_i with E_i ~ Exp(1); the k smallest keys win, ordered
// ascending, ties broken by index. Equal in distribution to sequential
// weighted draws with renormalization. Zero-probability entries are only
// drawn after every positive-probability entry is exhausted.
std::vector<std::size_t> sample_without_replacement(std::span<const double> probabilities,
                                                    std::size_t k, RandomStream& stream);

// Softmax over the scene's pool weights, then cfg.draws_per_scene draws from
// the stream derived as (seed, "scene:" + scene_id). Empty pool gives an
// empty (skipped) plan.
ScenePlan select_per_scene(std::string_view scene_id, std::span<const Candidate> pool,
                           const SamplingConfig& cfg);

// One softmax over all pools concatenated in corpus order, then one draw per
// scene with a non-empty pool, all from the single stream (seed, "per-ego").
// Selections are mapped back to their scenes; a scene can receive several or
// none. Returns one plan per input scene, in input order.
std::vector<ScenePlan> select_per_ego(std::span<const SceneCandidates> scenes,
                                      const SamplingConfig& cfg);

}  // namespace scenaug
