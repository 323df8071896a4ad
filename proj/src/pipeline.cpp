#include "scenaug/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordered_parallel.hpp"
#include "scenaug/corpus_io.hpp"
#include "scenaug/errors.hpp"
#include "scenaug/kinematics.hpp"
#include "scenaug/transform.hpp"

namespace scenaug {
namespace {

using njson = nlohmann::json;

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_json_string(std::string& out, const std::string& s) { out += njson(s).dump(); }

int effective_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string line_where(const std::string& path, std::uint64_t line_no) {
  return path + ":" + std::to_string(line_no);
}

// Everything pass 1 learns about one corpus line. Workers fill this in
// parallel; the emitter consumes strictly in corpus order.
struct PassOneOutcome {
  std::uint64_t line_no = 0;
  std::string text;  // original line, copied through when valid
  bool valid = true;
  std::string error;  // drop reason, lenient mode only
  std::string scene_id;
  SceneCandidates pool;  // retained only when sampling is deferred (per-ego)
  ScenePlan plan;
  bool plan_ready = false;
  std::vector<double> base_weights;     // h of every eligible agent
  std::vector<double> sampled_weights;  // h of every selection, plan_ready only
  std::string scores_rows;
  std::uint64_t eligible = 0;
  std::uint64_t filtered = 0;
  std::uint64_t rej_disp = 0;
  std::uint64_t rej_comf = 0;
  std::uint64_t rej_ttc = 0;
};

void check_augment_config(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("no input corpus given");
  if (cfg.output.empty()) throw ConfigError("no output path given");
  if (!cfg.sampling.tau.uniform &&
      !(cfg.sampling.tau.value > 0.0 && std::isfinite(cfg.sampling.tau.value))) {
    throw ConfigError("tau must be positive and finite, or \"uniform\"");
  }
  if (cfg.sampling.draws_per_scene < 1) throw ConfigError("draws_per_scene must be >= 1");
  if (cfg.histogram_bins < 2) throw ConfigError("histogram_bins must be >= 2");
}

}  // namespace

std::string plan_header_line(const SamplingConfig& cfg) {
  std::string out = "{\"plan_version\":1,\"seed\":" + std::to_string(cfg.seed);
  out += ",\"tau\":";
  if (cfg.tau.uniform) {
    out += "\"uniform\"";
  } else {
    append_double(out, cfg.tau.value);
  }
  out += ",\"draws_per_scene\":" + std::to_string(cfg.draws_per_scene);
  out += ",\"mode\":\"";
  out += cfg.mode == SamplingMode::PerScene ? "per_scene" : "per_ego";
  out += "\"}";
  return out;
}

std::string plan_to_line(const ScenePlan& plan) {
  std::string out = "{\"scene_id\":";
  append_json_string(out, plan.scene_id);
  out += ",\"pool_size\":" + std::to_string(plan.pool_size);
  out += ",\"selected\":[";
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    if (i) out += ',';
    out += "{\"agent_id\":";
    append_json_string(out, plan.selected[i].agent_id);
    out += ",\"probability\":";
    append_double(out, plan.selected[i].probability);
    out += '}';
  }
  out += "]}";
  return out;
}

std::vector<ScenePlan> read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan file: " + path);
  std::vector<ScenePlan> plans;
  std::string line;
  std::uint64_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = line_where(path, line_no);
    try {
      njson j = njson::parse(line);
      if (!header_seen) {
        if (j.value("plan_version", 0) != 1) {
          throw DataError(where + ": unsupported plan_version");
        }
        header_seen = true;
        continue;
      }
      ScenePlan plan;
      plan.scene_id = j.at("scene_id").get<std::string>();
      plan.pool_size = j.at("pool_size").get<std::uint64_t>();
      for (const njson& sel : j.at("selected")) {
        plan.selected.push_back(Selection{sel.at("agent_id").get<std::string>(),
                                          sel.at("probability").get<double>()});
      }
      plans.push_back(std::move(plan));
    } catch (const njson::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  if (!header_seen) throw DataError(path + ": missing plan header line");
  return plans;
}

RunSummary run_augment(const RunConfig& config) {
  RunConfig cfg = config;
  cfg.derive_output_paths();
  check_augment_config(cfg);
  const int jobs = effective_jobs(cfg.jobs);
  const bool replay = !cfg.replay_plan.empty();
  const bool defer_sampling = !replay && cfg.sampling.mode == SamplingMode::PerEgo;
  if (cfg.sampling.mode == SamplingMode::PerEgo && cfg.sampling.draws_per_scene != 1) {
    std::cerr << "warning: per-ego mode draws once per nonempty scene; draws_per_scene="
              << cfg.sampling.draws_per_scene << " is ignored\n";
  }

  std::vector<ScenePlan> replay_plans;
  std::map<std::string, const ScenePlan*> replay_by_id;
  if (replay) {
    replay_plans = read_plan_file(cfg.replay_plan);
    for (const ScenePlan& p : replay_plans) {
      if (!replay_by_id.emplace(p.scene_id, &p).second) {
        throw DataError(cfg.replay_plan + ": duplicate scene_id '" + p.scene_id + "'");
      }
    }
  }

  CorpusReader reader(cfg.input);
  const CorpusHeader header = reader.header();
  CorpusWriter writer(cfg.output, header);

  const ScoreParts parts{
      cfg.filters.active.comfort || !cfg.scores_out.empty(),
      cfg.filters.active.ttc || !cfg.scores_out.empty(),
  };

  RunSummary summary;
  std::vector<ScenePlan> plans;            // one per kept scene, corpus order
  std::vector<std::uint64_t> kept_lines;   // the kept scenes' input line numbers
  std::vector<SceneCandidates> pools;      // per-ego mode only
  std::vector<double> base_weights;
  std::vector<double> sampled_weights;
  std::set<std::string> seen_ids;
  std::string scores_csv;
  if (!cfg.scores_out.empty()) scores_csv = scores_csv_header();

  auto process_line = [&](CorpusReader::RawLine& raw) {
    PassOneOutcome out;
    out.line_no = raw.line_no;
    out.text = std::move(raw.text);
    const std::string where = line_where(cfg.input, out.line_no);

    SceneRecord scene;
    try {
      scene = parse_scene_line(out.text, where);
      ValidationReport report = validate_scene(scene);
      if (!report.ok()) {
        const Violation& v = report.violations.front();
        std::string msg = where + ": invalid scene: " + v.code;
        if (!v.where.empty()) msg += " (" + v.where + ")";
        if (report.violations.size() > 1) {
          msg += " and " + std::to_string(report.violations.size() - 1) + " more";
        }
        throw DataError(msg);
      }
    } catch (const DataError& e) {
      if (!cfg.lenient) throw;
      out.valid = false;
      out.error = e.what();
      return out;
    }

    out.scene_id = scene.scene_id;
    std::vector<std::string> pool = eligible_pool(scene, cfg.filters);
    auto scores = score_candidates(scene, pool, cfg.comfort, cfg.ttc, parts);
    std::vector<std::string> kept = filtered_pool(pool, scores, cfg.filters);
    out.eligible = pool.size();
    out.filtered = kept.size();
    for (const std::string& id : pool) {
      const CandidateScore& s = scores.at(id);
      out.base_weights.push_back(s.heading_deviation);
      if (s.passes_filters) continue;
      // Each rejected candidate is charged to the first failing filter in
      // application order, so the tallies partition eligible - filtered.
      if (cfg.filters.active.displacement && s.displacement < cfg.filters.min_displacement) {
        ++out.rej_disp;
      } else if (cfg.filters.active.comfort &&
                 s.comfort_violations > cfg.filters.max_comfort_violations) {
        ++out.rej_comf;
      } else if (cfg.filters.active.ttc && s.ttc_violations > cfg.filters.max_ttc_violations) {
        ++out.rej_ttc;
      }
    }
    if (!cfg.scores_out.empty()) append_scores_csv(out.scores_rows, scene.scene_id, scores);

    std::vector<Candidate> cands;
    cands.reserve(kept.size());
    for (const std::string& id : kept) {
      cands.push_back(Candidate{id, scores.at(id).heading_deviation});
    }

    if (replay) {
      auto it = replay_by_id.find(scene.scene_id);
      if (it == replay_by_id.end()) {
        throw DataError(where + ": scene '" + scene.scene_id + "' has no entry in the replay plan");
      }
      const ScenePlan& recorded = *it->second;
      if (recorded.pool_size != cands.size()) {
        throw DataError(where + ": replay pool size " + std::to_string(recorded.pool_size) +
                        " does not match recomputed pool of " + std::to_string(cands.size()) +
                        "; the plan was made with a different corpus or filter config");
      }
      for (const Selection& sel : recorded.selected) {
        bool known = false;
        for (const Candidate& c : cands) known = known || c.agent_id == sel.agent_id;
        if (!known) {
          throw DataError(where + ": replay selects '" + sel.agent_id +
                          "', which is not in the recomputed pool");
        }
      }
      out.plan = recorded;
      out.plan_ready = true;
    } else if (!defer_sampling) {
      out.plan = select_per_scene(scene.scene_id, cands, cfg.sampling);
      out.plan_ready = true;
    } else {
      out.pool = SceneCandidates{scene.scene_id, std::move(cands)};
    }

    if (out.plan_ready) {
      std::map<std::string, double> weight_by_id;
      for (const Candidate& c : cands) weight_by_id.emplace(c.agent_id, c.weight);
      for (const Selection& sel : out.plan.selected) {
        out.sampled_weights.push_back(weight_by_id.at(sel.agent_id));
      }
    }
    return out;
  };

  detail::ordered_pipeline<CorpusReader::RawLine, PassOneOutcome>(
      [&]() { return reader.next_line(); }, process_line,
      [&](PassOneOutcome& out) {
        if (!out.valid) {
          ++summary.invalid_dropped;
          return;
        }
        if (!seen_ids.insert(out.scene_id).second) {
          throw DataError(line_where(cfg.input, out.line_no) + ": duplicate scene_id '" +
                          out.scene_id + "'");
        }
        writer.write_line(out.text);
        ++summary.scenes_in;
        kept_lines.push_back(out.line_no);
        summary.eligible_agents += out.eligible;
        summary.filtered_agents += out.filtered;
        summary.rejected_displacement += out.rej_disp;
        summary.rejected_comfort += out.rej_comf;
        summary.rejected_ttc += out.rej_ttc;
        base_weights.insert(base_weights.end(), out.base_weights.begin(), out.base_weights.end());
        sampled_weights.insert(sampled_weights.end(), out.sampled_weights.begin(),
                               out.sampled_weights.end());
        scores_csv += out.scores_rows;
        if (defer_sampling) {
          pools.push_back(std::move(out.pool));
        } else {
          plans.push_back(std::move(out.plan));
        }
      },
      jobs);

  if (replay && summary.scenes_in != replay_plans.size()) {
    throw DataError(cfg.replay_plan + ": plan has " + std::to_string(replay_plans.size()) +
                    " scene entries but the corpus kept " + std::to_string(summary.scenes_in));
  }

  if (defer_sampling) {
    plans = select_per_ego(pools, cfg.sampling);
    for (std::size_t i = 0; i < plans.size(); ++i) {
      std::map<std::string, double> weight_by_id;
      for (const Candidate& c : pools[i].pool) weight_by_id.emplace(c.agent_id, c.weight);
      for (const Selection& sel : plans[i].selected) {
        sampled_weights.push_back(weight_by_id.at(sel.agent_id));
      }
    }
    pools.clear();
    pools.shrink_to_fit();
  }

  for (const ScenePlan& plan : plans) {
    summary.augmented += plan.selected.size();
    if (plan.skipped()) ++summary.skipped_scenes;
  }

  // Pass 2: re-read only the selected scenes and append their augmented
  // versions, still in corpus order.
  struct AugmentWork {
    std::uint64_t line_no = 0;
    std::string text;
    const ScenePlan* plan = nullptr;
  };
  CorpusReader replay_reader(cfg.input);
  std::size_t next_plan = 0;
  detail::ordered_pipeline<AugmentWork, std::vector<std::string>>(
      [&]() -> std::optional<AugmentWork> {
        while (next_plan < plans.size()) {
          auto raw = replay_reader.next_line();
          if (!raw) break;
          if (raw->line_no != kept_lines[next_plan]) continue;  // dropped line
          const ScenePlan* plan = &plans[next_plan];
          ++next_plan;
          if (plan->selected.empty()) continue;
          return AugmentWork{raw->line_no, std::move(raw->text), plan};
        }
        return std::nullopt;
      },
      [&](AugmentWork& work) {
        SceneRecord scene = parse_scene_line(work.text, line_where(cfg.input, work.line_no));
        std::vector<SceneRecord> augmented =
            augment_dataset(std::span<const SceneRecord>(&scene, 1),
                            std::span<const ScenePlan>(work.plan, 1), cfg.keep_original_ego);
        std::vector<std::string> lines;
        lines.reserve(augmented.size());
        for (const SceneRecord& out : augmented) lines.push_back(scene_to_line(out));
        return lines;
      },
      [&](std::vector<std::string>& lines) {
        for (const std::string& line : lines) writer.write_line(line);
      },
      jobs);

  summary.scenes_out = writer.scenes_written();
  check_summary_identity(summary);

  std::string plan_text = plan_header_line(cfg.sampling);
  plan_text += '\n';
  for (const ScenePlan& plan : plans) {
    plan_text += plan_to_line(plan);
    plan_text += '\n';
  }
  write_text_file(cfg.plan_out, plan_text);

  Histogram hist = build_histogram(base_weights, sampled_weights, cfg.histogram_bins);
  write_text_file(cfg.histogram_out, histogram_csv(hist));

  if (!cfg.scores_out.empty()) write_text_file(cfg.scores_out, scores_csv);

  std::string summary_json = "{\"scenes_in\":" + std::to_string(summary.scenes_in);
  summary_json += ",\"scenes_out\":" + std::to_string(summary.scenes_out);
  summary_json += ",\"augmented\":" + std::to_string(summary.augmented);
  summary_json += ",\"skipped_scenes\":" + std::to_string(summary.skipped_scenes);
  summary_json += ",\"invalid_dropped\":" + std::to_string(summary.invalid_dropped);
  summary_json += ",\"eligible_agents\":" + std::to_string(summary.eligible_agents);
  summary_json += ",\"filtered_agents\":" + std::to_string(summary.filtered_agents);
  summary_json += ",\"rejected_displacement\":" + std::to_string(summary.rejected_displacement);
  summary_json += ",\"rejected_comfort\":" + std::to_string(summary.rejected_comfort);
  summary_json += ",\"rejected_ttc\":" + std::to_string(summary.rejected_ttc);
  summary_json += ",\"skip_rate\":";
  append_double(summary_json, summary.skip_rate());
  summary_json += ",\"config\":" + config_echo_json(cfg);
  summary_json += "}\n";
  write_text_file(cfg.summary_out, summary_json);

  // The corpus itself goes last: it only appears once every report exists.
  writer.commit();
  return summary;
}

std::uint64_t run_validate(const std::string& input_path, std::string& report_out) {
  CorpusReader reader(input_path);
  std::set<std::string> seen_ids;
  std::uint64_t invalid = 0;
  while (auto raw = reader.next_line()) {
    const std::string where = line_where(input_path, raw->line_no);
    try {
      SceneRecord scene = parse_scene_line(raw->text, where);
      bool bad = false;
      ValidationReport report = validate_scene(scene);
      for (const Violation& v : report.violations) {
        report_out += where + ": " + scene.scene_id + ": " + v.code;
        if (!v.where.empty()) report_out += " (" + v.where + ")";
        report_out += '\n';
        bad = true;
      }
      if (!seen_ids.insert(scene.scene_id).second) {
        report_out += where + ": duplicate scene_id '" + scene.scene_id + "'\n";
        bad = true;
      }
      if (bad) ++invalid;
    } catch (const DataError& e) {
      report_out += e.what();
      report_out += '\n';
      ++invalid;
    }
  }
  return invalid;
}

void run_stats_histogram(const RunConfig& cfg, const std::string& plan_path,
                         const std::string& out_path) {
  if (cfg.histogram_bins < 2) throw ConfigError("histogram_bins must be >= 2");
  std::vector<ScenePlan> plans;
  std::map<std::string, std::size_t> plan_by_id;
  if (!plan_path.empty()) {
    plans = read_plan_file(plan_path);
    for (std::size_t i = 0; i < plans.size(); ++i) {
      if (!plan_by_id.emplace(plans[i].scene_id, i).second) {
        throw DataError(plan_path + ": duplicate scene_id '" + plans[i].scene_id + "'");
      }
    }
  }

  CorpusReader reader(cfg.input);
  std::vector<double> base;
  std::vector<double> sampled;
  std::vector<bool> plan_used(plans.size(), false);
  while (auto scene = reader.next_scene()) {
    std::map<std::string, double> h_by_id;
    for (const std::string& id : eligible_pool(*scene, cfg.filters)) {
      for (const AgentTrack& track : scene->agents) {
        if (track.agent_id != id) continue;
        const double h = heading_deviation_sum(track, scene->history_len);
        base.push_back(h);
        h_by_id.emplace(id, h);
        break;
      }
    }
    auto it = plan_by_id.find(scene->scene_id);
    if (it == plan_by_id.end()) continue;
    plan_used[it->second] = true;
    for (const Selection& sel : plans[it->second].selected) {
      auto hit = h_by_id.find(sel.agent_id);
      if (hit != h_by_id.end()) {
        sampled.push_back(hit->second);
        continue;
      }
      bool found = false;
      for (const AgentTrack& track : scene->agents) {
        if (track.agent_id != sel.agent_id) continue;
        sampled.push_back(heading_deviation_sum(track, scene->history_len));
        found = true;
        break;
      }
      if (!found) {
        throw DataError("plan selects missing agent '" + sel.agent_id + "' in scene '" +
                        scene->scene_id + "'");
      }
    }
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (!plan_used[i] && !plans[i].selected.empty()) {
      throw DataError("plan references unknown scene '" + plans[i].scene_id + "'");
    }
  }
  write_text_file(out_path, histogram_csv(build_histogram(base, sampled, cfg.histogram_bins)));
}

void run_stats_violations(const RunConfig& cfg, const std::string& csv_path,
                          const std::string& json_path) {
  CorpusReader reader(cfg.input);
  ViolationReport report;
  std::vector<AgentViolations> egos;
  std::vector<AgentViolations> others;
  while (auto scene = reader.next_scene()) {
    SceneViolations rows = scene_violation_rows(*scene, cfg.comfort, cfg.ttc, cfg.filters);
    egos.push_back(rows.ego);
    others.insert(others.end(), rows.others.begin(), rows.others.end());
    report.scenes.push_back(std::move(rows));
  }
  std::stable_sort(report.scenes.begin(), report.scenes.end(),
                   [](const SceneViolations& a, const SceneViolations& b) {
                     return a.scene_id < b.scene_id;
                   });
  report.ego = aggregate_violations(egos);
  report.others = aggregate_violations(others);
  if (!csv_path.empty()) write_text_file(csv_path, violation_report_csv(report));
  if (!json_path.empty()) write_text_file(json_path, violation_report_json(report));
}

}  // namespace scenaug
