#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "scenaug/errors.hpp"
#include "scenaug/stats.hpp"
#include "test_support.hpp"

using namespace scenaug;
using namespace scenaug::testutil;

TEST_CASE("build_histogram bins over [0, max] with an inclusive top edge") {
  const std::vector<double> base = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> sampled = {3.0};
  const Histogram h = build_histogram(base, sampled, 3);

  REQUIRE(h.bin_edges.size() == 4);
  CHECK(h.bin_edges[0] == 0.0);
  CHECK(h.bin_edges[1] == doctest::Approx(1.0));
  CHECK(h.bin_edges[2] == doctest::Approx(2.0));
  CHECK(h.bin_edges[3] == doctest::Approx(3.0));

  CHECK(h.counts_base == std::vector<std::int64_t>{1, 1, 2});  // 3.0 joins the last bin
  CHECK(h.counts_sampled == std::vector<std::int64_t>{0, 0, 1});
  CHECK(h.log_scale_hint);
}

TEST_CASE("histogram edges cover the sampled series too") {
  const std::vector<double> base = {0.5};
  const std::vector<double> sampled = {2.0};
  const Histogram h = build_histogram(base, sampled, 2);
  CHECK(h.bin_edges.back() == doctest::Approx(2.0));
  CHECK(h.counts_base == std::vector<std::int64_t>{1, 0});
  CHECK(h.counts_sampled == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("histogram input validation and degenerate input") {
  const std::vector<double> base = {1.0};
  CHECK_THROWS_AS(build_histogram(base, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_histogram(base, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_histogram(base, {}, -3), std::invalid_argument);
  CHECK_NOTHROW(build_histogram(base, {}, 2));

  // No data, or all-zero data: a unit range keeps the edges well formed.
  const Histogram empty = build_histogram({}, {}, 2);
  CHECK(empty.bin_edges.back() == doctest::Approx(1.0));
  CHECK(empty.counts_base == std::vector<std::int64_t>{0, 0});

  const std::vector<double> zeros = {0.0, 0.0};
  const Histogram z = build_histogram(zeros, {}, 2);
  CHECK(z.bin_edges.back() == doctest::Approx(1.0));
  CHECK(z.counts_base == std::vector<std::int64_t>{2, 0});
}

TEST_CASE("every value lands in exactly one bin") {
  std::vector<double> base(100);
  for (int i = 0; i < 100; ++i) base[i] = 0.037 * i;
  const Histogram h = build_histogram(base, {}, 7);
  CHECK(std::accumulate(h.counts_base.begin(), h.counts_base.end(), std::int64_t{0}) == 100);
}

TEST_CASE("heading_histogram recomputes pools and bins plan selections") {
  SceneRecord scene = base_scene(5);
  AgentTrack turner;
  turner.agent_id = "turner";
  for (int t = 0; t < 5; ++t) {
    turner.states.push_back(state_at(3.0, 2.0, wrap_angle(0.1 * t), 1.0, 0.0));
  }
  scene.agents.push_back(turner);
  scene.agents.push_back(constant_track("straight", {-3.0, -2.0}, {1.0, 0.0}, 5));

  ScenePlan plan;
  plan.scene_id = "s";
  plan.pool_size = 2;
  plan.selected = {{"turner", 0.9}};

  const std::vector<SceneRecord> scenes = {scene};
  const std::vector<ScenePlan> plans = {plan};
  const Histogram h = heading_histogram(scenes, plans, 4, FilterConfig{});

  // Base series: both pool members (h = 0.4 and 0); sampled: the turner.
  CHECK(std::accumulate(h.counts_base.begin(), h.counts_base.end(), std::int64_t{0}) == 2);
  CHECK(std::accumulate(h.counts_sampled.begin(), h.counts_sampled.end(), std::int64_t{0}) == 1);
  CHECK(h.bin_edges.back() == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(h.counts_base.front() == 1);   // the straight agent at h = 0
  CHECK(h.counts_base.back() == 1);    // the turner at the top edge
  CHECK(h.counts_sampled.back() == 1);

  // Skipped plans contribute nothing.
  ScenePlan skipped;
  skipped.scene_id = "missing-scene";  // never dereferenced when empty
  const std::vector<ScenePlan> skips = {skipped};
  const Histogram h2 = heading_histogram(scenes, skips, 4, FilterConfig{});
  CHECK(std::accumulate(h2.counts_sampled.begin(), h2.counts_sampled.end(), std::int64_t{0}) ==
        0);

  ScenePlan unknown_scene;
  unknown_scene.scene_id = "missing-scene";
  unknown_scene.selected = {{"turner", 1.0}};
  const std::vector<ScenePlan> bad_scene = {unknown_scene};
  CHECK_THROWS_AS(heading_histogram(scenes, bad_scene, 4, FilterConfig{}), DataError);

  ScenePlan unknown_agent;
  unknown_agent.scene_id = "s";
  unknown_agent.selected = {{"ghost", 1.0}};
  const std::vector<ScenePlan> bad_agent = {unknown_agent};
  CHECK_THROWS_AS(heading_histogram(scenes, bad_agent, 4, FilterConfig{}), DataError);
}

TEST_CASE("histogram CSV layout") {
  const std::vector<double> base = {0.0, 1.0, 2.0, 3.0, 3.0};
  const std::vector<double> sampled = {3.0};
  const Histogram h = build_histogram(base, sampled, 2);
  CHECK(histogram_csv(h) ==
        "bin_lo,bin_hi,count_base,count_sampled\n"
        "0,1.5,2,0\n"
        "1.5,3,3,1\n");
}

TEST_CASE("run summary identity") {
  RunSummary ok;
  ok.scenes_in = 10;
  ok.augmented = 7;
  ok.scenes_out = 17;
  CHECK_NOTHROW(check_summary_identity(ok));

  RunSummary lost = ok;
  lost.scenes_out = 16;
  CHECK_THROWS_AS(check_summary_identity(lost), DataError);
  RunSummary duplicated = ok;
  duplicated.scenes_out = 18;
  CHECK_THROWS_AS(check_summary_identity(duplicated), DataError);
}

TEST_CASE("skip rate") {
  RunSummary s;
  CHECK(s.skip_rate() == 0.0);  // no scenes: defined as zero
  s.scenes_in = 8;
  s.skipped_scenes = 2;
  CHECK(s.skip_rate() == doctest::Approx(0.25));
}
