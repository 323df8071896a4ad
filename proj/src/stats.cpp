#include "scenaug/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "scenaug/errors.hpp"
#include "scenaug/kinematics.hpp"

namespace scenaug {
namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::size_t bin_index(double v, double lo, double width, int bins) {
  if (width <= 0.0) return 0;
  auto idx = static_cast<long>(std::floor((v - lo) / width));
  return static_cast<std::size_t>(std::clamp<long>(idx, 0, bins - 1));
}

}  // namespace

Histogram build_histogram(std::span<const double> base, std::span<const double> sampled,
                          int bins) {
  if (bins < 2) {
    throw std::invalid_argument("build_histogram: bins must be >= 2");
  }
  double hi = 0.0;
  for (double v : base) hi = std::max(hi, v);
  for (double v : sampled) hi = std::max(hi, v);
  if (hi <= 0.0) hi = 1.0;

  Histogram hist;
  hist.bin_edges.resize(bins + 1);
  const double width = hi / bins;
  for (int i = 0; i <= bins; ++i) {
    hist.bin_edges[i] = width * i;
  }
  hist.counts_base.assign(bins, 0);
  hist.counts_sampled.assign(bins, 0);
  for (double v : base) ++hist.counts_base[bin_index(v, 0.0, width, bins)];
  for (double v : sampled) ++hist.counts_sampled[bin_index(v, 0.0, width, bins)];
  return hist;
}

Histogram heading_histogram(std::span<const SceneRecord> scenes,
                            std::span<const ScenePlan> plans, int bins,
                            const FilterConfig& cfg) {
  std::vector<double> base;
  std::vector<double> sampled;

  std::map<std::string, const SceneRecord*> by_id;
  for (const SceneRecord& scene : scenes) by_id.emplace(scene.scene_id, &scene);

  for (const SceneRecord& scene : scenes) {
    for (const std::string& id : eligible_pool(scene, cfg)) {
      auto it = std::find_if(scene.agents.begin(), scene.agents.end(),
                             [&](const AgentTrack& a) { return a.agent_id == id; });
      base.push_back(heading_deviation_sum(*it, scene.history_len));
    }
  }
  for (const ScenePlan& plan : plans) {
    if (plan.selected.empty()) continue;
    auto scene_it = by_id.find(plan.scene_id);
    if (scene_it == by_id.end()) {
      throw DataError("heading_histogram: plan references unknown scene '" + plan.scene_id + "'");
    }
    const SceneRecord& scene = *scene_it->second;
    for (const Selection& sel : plan.selected) {
      auto it = std::find_if(scene.agents.begin(), scene.agents.end(),
                             [&](const AgentTrack& a) { return a.agent_id == sel.agent_id; });
      if (it == scene.agents.end()) {
        throw DataError("heading_histogram: plan selects missing agent '" + sel.agent_id +
                        "' in scene '" + plan.scene_id + "'");
      }
      sampled.push_back(heading_deviation_sum(*it, scene.history_len));
    }
  }
  return build_histogram(base, sampled, bins);
}

std::string histogram_csv(const Histogram& hist) {
  std::string out = "bin_lo,bin_hi,count_base,count_sampled\n";
  for (std::size_t i = 0; i + 1 < hist.bin_edges.size(); ++i) {
    append_double(out, hist.bin_edges[i]);
    out += ',';
    append_double(out, hist.bin_edges[i + 1]);
    out += ',';
    out += std::to_string(hist.counts_base[i]);
    out += ',';
    out += std::to_string(hist.counts_sampled[i]);
    out += '\n';
  }
  return out;
}

void check_summary_identity(const RunSummary& summary) {
  if (summary.scenes_out != summary.scenes_in + summary.augmented) {
    throw DataError("run summary identity violated: wrote " +
                    std::to_string(summary.scenes_out) + " scenes, expected " +
                    std::to_string(summary.scenes_in) + " + " +
                    std::to_string(summary.augmented));
  }
}

}  // namespace scenaug
