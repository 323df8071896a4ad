// Run-level reporting: weight histograms and corpus tallies.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scenaug/eligibility.hpp"
#include "scenaug/sampler.hpp"
#include "scenaug/scenario.hpp"

namespace scenaug {

// Heading-deviation histogram with a base series (every eligible agent) and
// a sampled series (every plan selection) over shared bin edges.
struct Histogram {
  std::vector<double> bin_edges;  // rad, size bins + 1, uniform, ascending
  std::vector<std::int64_t> counts_base;
  std::vector<std::int64_t> counts_sampled;
  bool log_scale_hint = true;  // counts span orders of magnitude; plot on log-y
};

// Uniform bins spanning [0, max(values)]; the top edge is inclusive.
// Requires bins >= 2. The sampled series shares the base series' edges.
Histogram build_histogram(std::span<const double> base, std::span<const double> sampled,
                          int bins);

// Recomputes eligibility pools and weights for `scenes`, then bins them as
// the base series; plan selections form the sampled series. Plans referring
// to unknown scenes or agents raise DataError.
Histogram heading_histogram(std::span<const SceneRecord> scenes,
                            std::span<const ScenePlan> plans, int bins,
                            const FilterConfig& cfg);

// Fixed columns: bin_lo,bin_hi,count_base,count_sampled.
std::string histogram_csv(const Histogram& hist);

// Tallies accumulated by an augmentation run.
struct RunSummary {
  std::uint64_t scenes_in = 0;         // valid scenes read
  std::uint64_t scenes_out = 0;        // originals + augmented written
  std::uint64_t augmented = 0;         // selections realized
  std::uint64_t skipped_scenes = 0;    // valid scenes with no selection
  std::uint64_t invalid_dropped = 0;   // lenient mode only
  std::uint64_t eligible_agents = 0;
  std::uint64_t filtered_agents = 0;   // pool members surviving filters
  std::uint64_t rejected_displacement = 0;
  std::uint64_t rejected_comfort = 0;
  std::uint64_t rejected_ttc = 0;

  double skip_rate() const {
    return scenes_in == 0 ? 0.0 : static_cast<double>(skipped_scenes) / scenes_in;
  }
};

// Output-count identity: scenes_out == scenes_in + augmented. DataError when
// it does not hold; a run must never silently lose or duplicate scenes.
void check_summary_identity(const RunSummary& summary);

}  // namespace scenaug
