#include "scenaug/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scenaug {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conditional probability of each draw given the previous ones, i.e. the
// draw's weight over the not-yet-removed mass.
void fill_draw_probabilities(std::span<const double> probs,
                             const std::vector<std::size_t>& picks,
                             std::vector<Selection>& out) {
  double remaining = 1.0;
  for (std::size_t m = 0; m < picks.size(); ++m) {
    const double p = probs[picks[m]];
    out[m].probability = remaining > 0.0 ? std::min(1.0, p / remaining) : 0.0;
    remaining -= p;
  }
}

}  // namespace

std::vector<double> softmax_weights(std::span<const double> weights, const Temperature& tau) {
  if (weights.empty()) {
    throw std::invalid_argument("softmax_weights: empty weight vector");
  }
  const std::size_t n = weights.size();
  if (tau.uniform) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  if (!(tau.value > 0.0) || !std::isfinite(tau.value)) {
    throw std::invalid_argument("softmax_weights: temperature must be positive and finite");
  }
  double max_scaled = -kInf;
  for (double w : weights) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("softmax_weights: non-finite weight");
    }
    max_scaled = std::max(max_scaled, w / tau.value);
  }
  std::vector<double> p(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::exp(weights[i] / tau.value - max_scaled);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<std::size_t> sample_without_replacement(std::span<const double> probabilities,
                                                    std::size_t k, RandomStream& stream) {
  const std::size_t n = probabilities.size();
  std::vector<std::pair<double, std::size_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = stream.next_exponential();
    const double p = probabilities[i];
    keyed[i] = {p > 0.0 ? e / p : kInf, i};
  }
  const std::size_t take = std::min(k, n);
  std::partial_sort(keyed.begin(), keyed.begin() + take, keyed.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first < b.first : a.second < b.second;
                    });
  std::vector<std::size_t> picks(take);
  for (std::size_t m = 0; m < take; ++m) picks[m] = keyed[m].second;
  return picks;
}

ScenePlan select_per_scene(std::string_view scene_id, std::span<const Candidate> pool,
                           const SamplingConfig& cfg) {
  ScenePlan plan;
  plan.scene_id = std::string(scene_id);
  plan.pool_size = pool.size();
  if (pool.empty() || cfg.draws_per_scene <= 0) return plan;

  std::vector<double> weights(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) weights[i] = pool[i].weight;
  const std::vector<double> probs = softmax_weights(weights, cfg.tau);

  RandomStream stream = derive_stream(cfg.seed, "scene:" + plan.scene_id);
  const auto picks =
      sample_without_replacement(probs, static_cast<std::size_t>(cfg.draws_per_scene), stream);

  plan.selected.resize(picks.size());
  for (std::size_t m = 0; m < picks.size(); ++m) {
    plan.selected[m].agent_id = pool[picks[m]].agent_id;
  }
  fill_draw_probabilities(probs, picks, plan.selected);
  return plan;
}

std::vector<ScenePlan> select_per_ego(std::span<const SceneCandidates> scenes,
                                      const SamplingConfig& cfg) {
  std::vector<ScenePlan> plans(scenes.size());
  std::vector<double> weights;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (scene idx, pool idx)
  std::size_t scenes_with_pool = 0;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    plans[s].scene_id = scenes[s].scene_id;
    plans[s].pool_size = scenes[s].pool.size();
    if (!scenes[s].pool.empty()) ++scenes_with_pool;
    for (std::size_t i = 0; i < scenes[s].pool.size(); ++i) {
      weights.push_back(scenes[s].pool[i].weight);
      origin.emplace_back(s, i);
    }
  }
  if (weights.empty() || scenes_with_pool == 0) return plans;

  const std::vector<double> probs = softmax_weights(weights, cfg.tau);
  RandomStream stream = derive_stream(cfg.seed, "per-ego");
  const auto picks = sample_without_replacement(probs, scenes_with_pool, stream);

  // Draw order is global; a scene's selections keep their global order.
  std::vector<Selection> flat(picks.size());
  fill_draw_probabilities(probs, picks, flat);
  for (std::size_t m = 0; m < picks.size(); ++m) {
    const auto [s, i] = origin[picks[m]];
    flat[m].agent_id = scenes[s].pool[i].agent_id;
    plans[s].selected.push_back(flat[m]);
  }
  return plans;
}

}  // namespace scenaug
