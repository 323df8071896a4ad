// End-to-end runs: streaming augmentation, corpus validation, offline stats.
#pragma once

#include <string>

#include "scenaug/config.hpp"
#include "scenaug/stats.hpp"

namespace scenaug {

// Two-pass streaming augmentation.
//
// Pass 1 validates each scene, copies its line through to the output, builds
// its candidate pool, and (per-scene mode) draws its selections; per-ego
// draws happen once after the whole corpus is seen. Pass 2 re-reads only the
// selected scenes and appends their augmented versions after all originals.
// Memory stays O(one scene + selection plans); scene work parallelizes over
// cfg.jobs workers with byte-identical output at any degree. All outputs are
// published by atomic rename after completion.
//
// Output files: augmented corpus, selection plan (JSONL), summary JSON with
// the effective config echo, histogram CSV, optional candidate-score CSV.
RunSummary run_augment(const RunConfig& cfg);

// Streams the corpus, printing one line per violation. Returns the number of
// invalid scenes (malformed lines count).
std::uint64_t run_validate(const std::string& input_path, std::string& report_out);

// Offline reports over an existing corpus (and optionally its plan file).
void run_stats_histogram(const RunConfig& cfg, const std::string& plan_path,
                         const std::string& out_path);
void run_stats_violations(const RunConfig& cfg, const std::string& csv_path,
                          const std::string& json_path);

// Plan-file round trip. A plan file is JSONL: one header line recording the
// sampling configuration, then one line per kept scene in corpus order.
std::string plan_header_line(const SamplingConfig& cfg);
std::string plan_to_line(const ScenePlan& plan);
std::vector<ScenePlan> read_plan_file(const std::string& path);

}  // namespace scenaug
