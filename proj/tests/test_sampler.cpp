#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "scenaug/sampler.hpp"

using namespace scenaug;

namespace {

std::vector<Candidate> make_pool(const std::vector<std::pair<std::string, double>>& entries) {
  std::vector<Candidate> pool;
  for (const auto& [id, w] : entries) pool.push_back({id, w});
  return pool;
}

}  // namespace

TEST_CASE("softmax frozen values") {
  const std::vector<double> two = {0.0, std::log(2.0)};
  const auto p = softmax_weights(two, Temperature::of(1.0));
  CHECK(p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const std::vector<double> pair = {1.0, 2.0};
  const auto q = softmax_weights(pair, Temperature::of(0.5));
  CHECK(q[0] == doctest::Approx(0.11920292202211755).epsilon(1e-14));
  CHECK(q[1] == doctest::Approx(0.8807970779778824).epsilon(1e-14));

  const std::vector<double> spread = {0.0, 0.0, 5.0};
  const auto r = softmax_weights(spread, Temperature::of(0.5));
  const double e10 = std::exp(10.0);
  CHECK(r[2] == doctest::Approx(e10 / (2.0 + e10)).epsilon(1e-14));

  const std::vector<double> lone = {7.3};
  CHECK(softmax_weights(lone, Temperature::of(0.2))[0] == 1.0);
}

TEST_CASE("softmax uniform sentinel is exact") {
  const std::vector<double> w = {0.0, 1.0, 3.7, 100.0};
  const auto p = softmax_weights(w, Temperature::uniform_sampling());
  for (double v : p) CHECK(v == 1.0 / 4.0);  // bit-exact, weights ignored
}

TEST_CASE("softmax properties: normalization, shift invariance, argmax, flattening") {
  RandomStream rng(41);
  const double taus[] = {0.01, 0.1, 0.5, 1.0, 10.0};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 12;
    std::vector<double> w(n);
    for (double& v : w) v = rng.next_double() * 6.0;
    const std::size_t argmax =
        std::max_element(w.begin(), w.end()) - w.begin();

    double prev_top = 1.0;
    for (double tau : taus) {
      const auto p = softmax_weights(w, Temperature::of(tau));
      const double sum = std::accumulate(p.begin(), p.end(), 0.0);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      for (double v : p) CHECK(v >= 0.0);
      CHECK(std::max_element(p.begin(), p.end()) - p.begin() == argmax);

      std::vector<double> shifted = w;
      for (double& v : shifted) v += 3.7;
      const auto ps = softmax_weights(shifted, Temperature::of(tau));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(p[i] - ps[i]) <= 1e-12);
      }

      // Raising tau flattens: the winner's share never grows.
      CHECK(p[argmax] <= prev_top + 1e-12);
      prev_top = p[argmax];
    }
    prev_top = 1.0;
  }

  // Cold temperature concentrates almost everything on the winner.
  const std::vector<double> gap = {0.0, 10.0};
  CHECK(softmax_weights(gap, Temperature::of(0.01))[1] > 1.0 - 1e-9);
}

TEST_CASE("softmax rejects bad input") {
  const std::vector<double> w = {1.0, 2.0};
  CHECK_THROWS_AS(softmax_weights({}, Temperature::of(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(softmax_weights(w, Temperature::of(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(softmax_weights(w, Temperature::of(-1.0)), std::invalid_argument);
  CHECK_THROWS_AS(softmax_weights(w, Temperature::of(std::nan(""))), std::invalid_argument);
  CHECK_THROWS_AS(
      softmax_weights(w, Temperature::of(std::numeric_limits<double>::infinity())),
      std::invalid_argument);
  const std::vector<double> bad = {1.0, std::nan("")};
  CHECK_THROWS_AS(softmax_weights(bad, Temperature::of(1.0)), std::invalid_argument);
  // Large weights must not overflow the exponentials.
  const std::vector<double> huge = {5000.0, 5001.0};
  const auto p = softmax_weights(huge, Temperature::of(1.0));
  CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
  CHECK(p[1] > p[0]);
}

TEST_CASE("sampling without replacement basics") {
  RandomStream stream(7);
  const std::vector<double> lone = {1.0};
  CHECK(sample_without_replacement(lone, 1, stream) == std::vector<std::size_t>{0});

  // k >= n exhausts the pool: a permutation of all indices.
  const std::vector<double> p = {0.4, 0.3, 0.2, 0.1};
  for (int trial = 0; trial < 20; ++trial) {
    auto picks = sample_without_replacement(p, 10, stream);
    REQUIRE(picks.size() == 4);
    auto sorted = picks;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3});
  }

  CHECK(sample_without_replacement(p, 0, stream).empty());
  CHECK(sample_without_replacement({}, 3, stream).empty());
}

TEST_CASE("zero-probability entries are drawn last") {
  const std::vector<double> p = {0.5, 0.0, 0.5};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomStream stream(seed);
    const auto picks = sample_without_replacement(p, 3, stream);
    REQUIRE(picks.size() == 3);
    CHECK(picks[2] == 1);
  }
}

TEST_CASE("sampling is a pure function of the stream") {
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  RandomStream a(123);
  RandomStream b(123);
  CHECK(sample_without_replacement(p, 2, a) == sample_without_replacement(p, 2, b));
  RandomStream c(124);
  bool all_equal = true;
  for (int i = 0; i < 10 && all_equal; ++i) {
    RandomStream x(123 + i), y(123 + i);
    all_equal = sample_without_replacement(p, 2, x) == sample_without_replacement(p, 2, y);
  }
  CHECK(all_equal);
}

TEST_CASE("first-draw frequencies track the probabilities") {
  const std::vector<double> p = {0.4, 0.3, 0.2, 0.1};
  std::map<std::size_t, int> first;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    RandomStream stream = derive_stream(99, "trial:" + std::to_string(i));
    ++first[sample_without_replacement(p, 1, stream)[0]];
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(static_cast<double>(first[i]) / trials - p[i]) < 0.02);
  }
}

TEST_CASE("select_per_scene reproduces the documented recipe") {
  const auto pool = make_pool({{"a", 0.2}, {"b", 1.4}, {"c", 0.7}});
  SamplingConfig cfg;
  cfg.tau = Temperature::of(0.5);
  cfg.draws_per_scene = 2;
  cfg.seed = 42;

  const ScenePlan plan = select_per_scene("scene-9", pool, cfg);
  CHECK(plan.scene_id == "scene-9");
  CHECK(plan.pool_size == 3);
  REQUIRE(plan.selected.size() == 2);

  // Independent replay of the contract: softmax over pool weights, then
  // exponential-keys draws from the stream derived as (seed, "scene:" + id).
  const std::vector<double> weights = {0.2, 1.4, 0.7};
  const auto probs = softmax_weights(weights, cfg.tau);
  RandomStream stream = derive_stream(42, "scene:scene-9");
  const auto picks = sample_without_replacement(probs, 2, stream);
  double remaining = 1.0;
  for (std::size_t m = 0; m < picks.size(); ++m) {
    CHECK(plan.selected[m].agent_id == pool[picks[m]].agent_id);
    CHECK(plan.selected[m].probability == std::min(1.0, probs[picks[m]] / remaining));
    remaining -= probs[picks[m]];
  }
}

TEST_CASE("select_per_scene edge cases") {
  SamplingConfig cfg;
  cfg.tau = Temperature::of(0.5);
  cfg.seed = 1;

  const ScenePlan empty = select_per_scene("s", {}, cfg);
  CHECK(empty.skipped());
  CHECK(empty.pool_size == 0);
  CHECK(empty.scene_id == "s");

  // More draws than candidates exhausts the pool without repetition.
  cfg.draws_per_scene = 10;
  const auto pool = make_pool({{"a", 0.0}, {"b", 1.0}});
  const ScenePlan all = select_per_scene("s", pool, cfg);
  REQUIRE(all.selected.size() == 2);
  CHECK(all.selected[0].agent_id != all.selected[1].agent_id);
  // The final draw is forced.
  CHECK(all.selected[1].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a dominant weight is selected almost surely") {
  const auto pool = make_pool({{"calm-1", 0.0}, {"calm-2", 0.0}, {"wild", 5.0}});
  SamplingConfig cfg;
  cfg.tau = Temperature::of(0.5);
  cfg.draws_per_scene = 1;
  cfg.seed = 7;

  int wild = 0;
  const int scenes = 500;
  for (int i = 0; i < scenes; ++i) {
    const ScenePlan plan = select_per_scene("s" + std::to_string(i), pool, cfg);
    if (plan.selected[0].agent_id == "wild") ++wild;
  }
  // p(wild) = e^10 / (2 + e^10), about 0.99991.
  CHECK(wild >= 495);
}

TEST_CASE("conditional draw probabilities renormalize over the remainder") {
  const auto pool = make_pool({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
  SamplingConfig cfg;
  cfg.tau = Temperature::of(1.0);  // equal weights: 1/3 each
  cfg.draws_per_scene = 3;
  cfg.seed = 5;

  const ScenePlan plan = select_per_scene("s", pool, cfg);
  REQUIRE(plan.selected.size() == 3);
  CHECK(plan.selected[0].probability == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(plan.selected[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plan.selected[2].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("select_per_ego draws once per nonempty scene from one shared stream") {
  std::vector<SceneCandidates> scenes(3);
  scenes[0] = {"s0", make_pool({{"a", 0.5}, {"b", 0.5}})};
  scenes[1] = {"s1", {}};  // empty pool: contributes nothing, receives nothing
  scenes[2] = {"s2", make_pool({{"c", 0.5}})};

  SamplingConfig cfg;
  cfg.tau = Temperature::of(1.0);
  cfg.seed = 11;
  cfg.mode = SamplingMode::PerEgo;

  const auto plans = select_per_ego(scenes, cfg);
  REQUIRE(plans.size() == 3);
  CHECK(plans[0].scene_id == "s0");
  CHECK(plans[0].pool_size == 2);
  CHECK(plans[1].skipped());
  CHECK(plans[1].pool_size == 0);

  std::size_t total = 0;
  for (const auto& p : plans) total += p.selected.size();
  CHECK(total == 2);  // two nonempty scenes, two draws

  // The same input replays identically.
  const auto again = select_per_ego(scenes, cfg);
  for (int s = 0; s < 3; ++s) {
    REQUIRE(again[s].selected.size() == plans[s].selected.size());
    for (std::size_t m = 0; m < plans[s].selected.size(); ++m) {
      CHECK(again[s].selected[m].agent_id == plans[s].selected[m].agent_id);
      CHECK(again[s].selected[m].probability == plans[s].selected[m].probability);
    }
  }
}

TEST_CASE("select_per_ego concentrates draws on the heavy scene") {
  std::vector<SceneCandidates> scenes(2);
  scenes[0] = {"calm", make_pool({{"a", 0.0}, {"b", 0.0}, {"c", 0.0}, {"d", 0.0}, {"e", 0.0}})};
  scenes[1] = {"wild", make_pool({{"x", 10.0}, {"y", 10.0}, {"z", 10.0}})};

  SamplingConfig cfg;
  cfg.tau = Temperature::of(0.1);
  cfg.mode = SamplingMode::PerEgo;

  int concentrated = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto plans = select_per_ego(scenes, cfg);
    if (plans[1].selected.size() == 2 && plans[0].selected.empty()) ++concentrated;
  }
  // Both global draws land on the wild scene essentially always.
  CHECK(concentrated >= 99);
}

TEST_CASE("per-ego conditional probabilities span scene boundaries") {
  std::vector<SceneCandidates> scenes(2);
  scenes[0] = {"s0", make_pool({{"a", 1.0}})};
  scenes[1] = {"s1", make_pool({{"b", 1.0}})};

  SamplingConfig cfg;
  cfg.tau = Temperature::of(1.0);  // global softmax: 0.5 each
  cfg.mode = SamplingMode::PerEgo;
  cfg.seed = 3;

  const auto plans = select_per_ego(scenes, cfg);
  std::vector<double> probs;
  for (const auto& p : plans) {
    for (const auto& sel : p.selected) probs.push_back(sel.probability);
  }
  REQUIRE(probs.size() == 2);
  // Draw order is global, so one of them was the 0.5 first pick and the
  // other the forced remainder.
  std::sort(probs.begin(), probs.end());
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("select_per_ego with every pool empty") {
  std::vector<SceneCandidates> scenes(2);
  scenes[0] = {"s0", {}};
  scenes[1] = {"s1", {}};
  SamplingConfig cfg;
  cfg.mode = SamplingMode::PerEgo;
  const auto plans = select_per_ego(scenes, cfg);
  REQUIRE(plans.size() == 2);
  CHECK(plans[0].skipped());
  CHECK(plans[1].skipped());
}
