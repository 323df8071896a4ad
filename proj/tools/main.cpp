#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scenaug/config.hpp"
#include "scenaug/errors.hpp"
#include "scenaug/pipeline.hpp"
#include "scenaug/synthetic.hpp"

namespace sc = scenaug;

namespace {

// Flags shared between augment and the stats subcommands. A flag overrides
// the config file only when it was actually given on the command line.
struct SharedOpts {
  std::string config_path;

  std::uint64_t seed = 0;
  std::string tau;
  int draws = 1;
  std::string mode;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_tau = nullptr;
  CLI::Option* o_draws = nullptr;
  CLI::Option* o_mode = nullptr;

  std::string filters;
  double radius = 50.0;
  double min_disp = 3.0;
  int max_comf = 5;
  int max_ttc = 0;
  std::string window;
  CLI::Option* o_filters = nullptr;
  CLI::Option* o_radius = nullptr;
  CLI::Option* o_min_disp = nullptr;
  CLI::Option* o_max_comf = nullptr;
  CLI::Option* o_max_ttc = nullptr;
  CLI::Option* o_window = nullptr;

  double accel_lon = 0.0, accel_lat = 0.0, jerk_lon = 0.0, jerk_lat = 0.0;
  double yaw_rate = 0.0, yaw_accel = 0.0;
  std::string combiner;
  CLI::Option* o_accel_lon = nullptr;
  CLI::Option* o_accel_lat = nullptr;
  CLI::Option* o_jerk_lon = nullptr;
  CLI::Option* o_jerk_lat = nullptr;
  CLI::Option* o_yaw_rate = nullptr;
  CLI::Option* o_yaw_accel = nullptr;
  CLI::Option* o_combiner = nullptr;

  double ttc_threshold = 0.0, ttc_epsilon = 0.0, ttc_margin = 0.0, ttc_prefilter = 0.0;
  CLI::Option* o_ttc_threshold = nullptr;
  CLI::Option* o_ttc_epsilon = nullptr;
  CLI::Option* o_ttc_margin = nullptr;
  CLI::Option* o_ttc_prefilter = nullptr;

  int bins = 50;
  CLI::Option* o_bins = nullptr;

  void add_config(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
  }
  void add_sampling(CLI::App* app) {
    o_seed = app->add_option("--seed", seed, "Sampling seed");
    o_tau = app->add_option("--tau", tau, "Softmax temperature, or \"uniform\"");
    o_draws =
        app->add_option("--ns,--draws-per-scene", draws, "Selections per scene (per-scene mode)");
    o_mode = app->add_option("--mode", mode, "per_scene or per_ego");
  }
  void add_filters(CLI::App* app) {
    o_filters = app->add_option("--filters", filters,
                                "Comma list of disp, comf, ttc; or \"none\"");
    o_radius = app->add_option("--radius", radius, "Max distance to ego [m]");
    o_min_disp = app->add_option("--min-displacement", min_disp, "disp filter floor [m]");
    o_max_comf = app->add_option("--max-comfort-violations", max_comf, "comf filter cap");
    o_max_ttc = app->add_option("--max-ttc-violations", max_ttc, "ttc filter cap");
    o_window = app->add_option("--window", window, "history_only or history_and_future");
  }
  void add_comfort(CLI::App* app) {
    o_accel_lon = app->add_option("--max-accel-lon", accel_lon, "Comfort bound [m/s^2]");
    o_accel_lat = app->add_option("--max-accel-lat", accel_lat, "Comfort bound [m/s^2]");
    o_jerk_lon = app->add_option("--max-jerk-lon", jerk_lon, "Comfort bound [m/s^3]");
    o_jerk_lat = app->add_option("--max-jerk-lat", jerk_lat, "Comfort bound [m/s^3]");
    o_yaw_rate = app->add_option("--max-yaw-rate", yaw_rate, "Comfort bound [rad/s]");
    o_yaw_accel = app->add_option("--max-yaw-accel", yaw_accel, "Comfort bound [rad/s^2]");
    o_combiner = app->add_option("--combiner", combiner, "all or any");
  }
  void add_ttc(CLI::App* app) {
    o_ttc_threshold = app->add_option("--ttc-threshold", ttc_threshold, "Violation bound [s]");
    o_ttc_epsilon = app->add_option("--ttc-epsilon", ttc_epsilon, "Closing speed floor [m/s]");
    o_ttc_margin = app->add_option("--ttc-lateral-margin", ttc_margin, "Corridor slack [m]");
    o_ttc_prefilter = app->add_option("--ttc-prefilter-radius", ttc_prefilter,
                                      "Pair distance cutoff [m]");
  }
  void add_bins(CLI::App* app) {
    o_bins = app->add_option("--histogram-bins", bins, "Histogram bin count");
  }

  void apply(sc::RunConfig& cfg) const {
    if (!config_path.empty()) cfg = sc::load_config_file(config_path, cfg);
    auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
    if (given(o_seed)) cfg.sampling.seed = seed;
    if (given(o_tau)) cfg.sampling.tau = sc::parse_temperature(tau);
    if (given(o_draws)) cfg.sampling.draws_per_scene = draws;
    if (given(o_mode)) cfg.sampling.mode = sc::parse_sampling_mode(mode);
    if (given(o_filters)) cfg.filters.active = sc::parse_filter_set(filters);
    if (given(o_radius)) cfg.filters.radius = radius;
    if (given(o_min_disp)) cfg.filters.min_displacement = min_disp;
    if (given(o_max_comf)) cfg.filters.max_comfort_violations = max_comf;
    if (given(o_max_ttc)) cfg.filters.max_ttc_violations = max_ttc;
    if (given(o_window)) {
      if (window == "history_only") {
        cfg.filters.window = sc::ObservabilityWindow::HistoryOnly;
      } else if (window == "history_and_future") {
        cfg.filters.window = sc::ObservabilityWindow::HistoryAndFuture;
      } else {
        throw sc::ConfigError("window must be history_only or history_and_future");
      }
    }
    if (given(o_accel_lon)) cfg.comfort.max_accel_lon = accel_lon;
    if (given(o_accel_lat)) cfg.comfort.max_accel_lat = accel_lat;
    if (given(o_jerk_lon)) cfg.comfort.max_jerk_lon = jerk_lon;
    if (given(o_jerk_lat)) cfg.comfort.max_jerk_lat = jerk_lat;
    if (given(o_yaw_rate)) cfg.comfort.max_yaw_rate = yaw_rate;
    if (given(o_yaw_accel)) cfg.comfort.max_yaw_accel = yaw_accel;
    if (given(o_combiner)) {
      if (combiner == "all") {
        cfg.comfort.combiner = sc::ComfortCombiner::AllConditions;
      } else if (combiner == "any") {
        cfg.comfort.combiner = sc::ComfortCombiner::AnyCondition;
      } else {
        throw sc::ConfigError("combiner must be all or any");
      }
    }
    if (given(o_ttc_threshold)) cfg.ttc.threshold = ttc_threshold;
    if (given(o_ttc_epsilon)) cfg.ttc.epsilon = ttc_epsilon;
    if (given(o_ttc_margin)) cfg.ttc.lateral_margin = ttc_margin;
    if (given(o_ttc_prefilter)) cfg.ttc.prefilter_radius = ttc_prefilter;
    if (given(o_bins)) cfg.histogram_bins = bins;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory corpus augmentation by re-centering on sampled agents"};
  app.require_subcommand(1);

  auto* augment = app.add_subcommand("augment", "Sample agents and append re-centered scenes");
  std::string aug_in, aug_out, plan_out, summary_out, histogram_out, scores_out, replay_plan;
  int jobs = 0;
  bool lenient = false;
  bool drop_original_ego = false;
  SharedOpts aug_opts;
  augment->add_option("-i,--input", aug_in, "Input corpus (JSONL)")->required();
  augment->add_option("-o,--output", aug_out, "Output corpus path")->required();
  aug_opts.add_config(augment);
  aug_opts.add_sampling(augment);
  aug_opts.add_filters(augment);
  aug_opts.add_comfort(augment);
  aug_opts.add_ttc(augment);
  aug_opts.add_bins(augment);
  augment->add_option("--plan-out", plan_out, "Selection plan path (default: from output)");
  augment->add_option("--summary-out", summary_out, "Summary JSON path (default: from output)");
  augment->add_option("--histogram-out", histogram_out,
                      "Weight histogram CSV path (default: from output)");
  augment->add_option("--scores-out", scores_out, "Per-candidate score CSV (off by default)");
  augment->add_option("--replay-plan", replay_plan, "Reuse selections from this plan file");
  auto* o_jobs = augment->add_option("--jobs", jobs, "Worker threads (0: hardware)");
  augment->add_flag("--lenient", lenient, "Drop invalid scenes instead of aborting");
  augment->add_flag("--drop-original-ego", drop_original_ego,
                    "Do not keep the source ego as an agent");

  auto* validate = app.add_subcommand("validate", "Check every scene invariant");
  std::string val_in;
  validate->add_option("-i,--input", val_in, "Corpus to check")->required();

  auto* stats = app.add_subcommand("stats", "Reports over an existing corpus");
  stats->require_subcommand(1);

  auto* hist = stats->add_subcommand("histogram", "Heading-deviation weight histogram");
  std::string hist_in, hist_plan, hist_out;
  SharedOpts hist_opts;
  hist->add_option("-i,--input", hist_in, "Corpus (JSONL)")->required();
  hist->add_option("--plan", hist_plan, "Selection plan for the sampled series");
  hist->add_option("-o,--out", hist_out, "Histogram CSV path")->required();
  hist_opts.add_config(hist);
  hist_opts.add_filters(hist);
  hist_opts.add_bins(hist);

  auto* viol = stats->add_subcommand("violations", "Ego vs pool violation counts");
  std::string viol_in, viol_csv, viol_json;
  SharedOpts viol_opts;
  viol->add_option("-i,--input", viol_in, "Corpus (JSONL)")->required();
  viol->add_option("--csv", viol_csv, "Per-agent rows CSV path");
  viol->add_option("--json", viol_json, "Aggregates JSON path");
  viol_opts.add_config(viol);
  viol_opts.add_filters(viol);
  viol_opts.add_comfort(viol);
  viol_opts.add_ttc(viol);

  auto* gen = app.add_subcommand("gen-synthetic", "Generate a labeled synthetic corpus");
  sc::GeneratorSpec spec;
  std::string gen_out;
  gen->add_option("-o,--out", gen_out, "Corpus path")->required();
  gen->add_option("--scenes", spec.scenes, "Scene count");
  gen->add_option("--cruisers", spec.cruisers, "Constant-velocity vehicles per scene");
  gen->add_option("--turners", spec.turners, "Constant-yaw-rate vehicles per scene");
  gen->add_option("--ramps", spec.ramps, "Linear speed ramp vehicles per scene");
  gen->add_option("--cubics", spec.cubics, "Cubic position vehicles per scene");
  gen->add_option("--violators", spec.violators, "Comfort violators per scene");
  gen->add_option("--tailgater-pairs", spec.tailgater_pairs, "Closing pairs per scene");
  gen->add_option("--stationary", spec.stationary, "Stopped on-road vehicles per scene");
  gen->add_option("--parked", spec.parked, "Off-road vehicles per scene");
  gen->add_option("--pedestrians", spec.pedestrians, "Pedestrians per scene");
  gen->add_option("--flickering", spec.flickering, "Partially observed vehicles per scene");
  gen->add_option("--dt", spec.dt, "Timestep [s]");
  gen->add_option("--history-len", spec.history_len, "History timesteps");
  gen->add_option("--future-len", spec.future_len, "Future timesteps");
  gen->add_option("--ego-speed", spec.ego_speed, "Ego speed [m/s]");
  gen->add_option("--cruiser-speed", spec.cruiser_speed, "Cruiser speed [m/s]");
  gen->add_option("--turner-speed", spec.turner_speed, "Turner speed [m/s]");
  gen->add_option("--turner-yaw-rate", spec.turner_yaw_rate, "Turner yaw rate [rad/s]");
  gen->add_option("--ramp-accel", spec.ramp_accel, "Ramp acceleration [m/s^2]");
  gen->add_option("--leader-speed", spec.leader_speed, "Tailgater leader speed [m/s]");
  gen->add_option("--closing-speed", spec.closing_speed, "Follower excess speed [m/s]");
  gen->add_option("--initial-gap", spec.initial_gap, "Tailgater starting gap [m]");
  gen->add_option("--violator-amp", spec.violator_amp, "Velocity square wave [m/s]");
  gen->add_option("--violator-yaw-amp", spec.violator_yaw_amp, "Heading square wave [rad]");
  gen->add_flag("--quantize", spec.quantize, "Round states before writing");
  gen->add_option("--seed", spec.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (augment->parsed()) {
      sc::RunConfig cfg;
      aug_opts.apply(cfg);
      cfg.input = aug_in;
      cfg.output = aug_out;
      if (!plan_out.empty()) cfg.plan_out = plan_out;
      if (!summary_out.empty()) cfg.summary_out = summary_out;
      if (!histogram_out.empty()) cfg.histogram_out = histogram_out;
      if (!scores_out.empty()) cfg.scores_out = scores_out;
      if (!replay_plan.empty()) cfg.replay_plan = replay_plan;
      if (o_jobs->count() > 0) cfg.jobs = jobs;
      if (lenient) cfg.lenient = true;
      if (drop_original_ego) cfg.keep_original_ego = false;
      sc::RunSummary summary = sc::run_augment(cfg);
      std::cout << "scenes_in=" << summary.scenes_in << " scenes_out=" << summary.scenes_out
                << " augmented=" << summary.augmented
                << " skipped_scenes=" << summary.skipped_scenes
                << " invalid_dropped=" << summary.invalid_dropped
                << " skip_rate=" << summary.skip_rate() << '\n';
      return 0;
    }
    if (validate->parsed()) {
      std::string report;
      std::uint64_t invalid = sc::run_validate(val_in, report);
      std::cout << report;
      std::cout << "invalid scenes: " << invalid << '\n';
      return invalid == 0 ? 0 : 3;
    }
    if (hist->parsed()) {
      sc::RunConfig cfg;
      hist_opts.apply(cfg);
      cfg.input = hist_in;
      sc::run_stats_histogram(cfg, hist_plan, hist_out);
      std::cout << "wrote " << hist_out << '\n';
      return 0;
    }
    if (viol->parsed()) {
      if (viol_csv.empty() && viol_json.empty()) {
        throw sc::ConfigError("violations: give --csv and/or --json");
      }
      sc::RunConfig cfg;
      viol_opts.apply(cfg);
      cfg.input = viol_in;
      sc::run_stats_violations(cfg, viol_csv, viol_json);
      if (!viol_csv.empty()) std::cout << "wrote " << viol_csv << '\n';
      if (!viol_json.empty()) std::cout << "wrote " << viol_json << '\n';
      return 0;
    }
    if (gen->parsed()) {
      sc::write_synthetic_corpus(spec, gen_out);
      std::cout << "wrote " << spec.scenes << " scenes to " << gen_out << '\n';
      return 0;
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const sc::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const sc::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
