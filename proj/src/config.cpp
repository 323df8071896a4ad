#include "scenaug/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scenaug/errors.hpp"

namespace scenaug {
namespace {

using njson = nlohmann::json;

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double need_positive(const njson& v, const char* key) {
  if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) {
    throw ConfigError(std::string("config: \"") + key + "\" must be a positive number");
  }
  return v.get<double>();
}

int need_nonneg_int(const njson& v, const char* key) {
  if (!v.is_number_integer() || v.get<int>() < 0) {
    throw ConfigError(std::string("config: \"") + key + "\" must be a non-negative integer");
  }
  return v.get<int>();
}

}  // namespace

void RunConfig::derive_output_paths() {
  auto stem = [this]() {
    const auto dot = output.rfind(".jsonl");
    return dot == output.size() - 6 && output.size() > 6 ? output.substr(0, dot) : output;
  }();
  if (plan_out.empty()) plan_out = stem + ".plan.jsonl";
  if (summary_out.empty()) summary_out = stem + ".summary.json";
  if (histogram_out.empty()) histogram_out = stem + ".histogram.csv";
}

Temperature parse_temperature(const std::string& text) {
  if (text == "uniform") return Temperature::uniform_sampling();
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(v > 0.0) ||
      !std::isfinite(v)) {
    throw ConfigError("tau must be a positive number or \"uniform\", got \"" + text + "\"");
  }
  return Temperature::of(v);
}

FilterSet parse_filter_set(const std::string& csv) {
  FilterSet set;
  if (csv.empty() || csv == "none") return set;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "disp") set.displacement = true;
    else if (item == "comf") set.comfort = true;
    else if (item == "ttc") set.ttc = true;
    else throw ConfigError("unknown filter \"" + item + "\" (expected disp, comf, ttc)");
  }
  return set;
}

SamplingMode parse_sampling_mode(const std::string& text) {
  if (text == "per_scene" || text == "per-scene") return SamplingMode::PerScene;
  if (text == "per_ego" || text == "per-ego") return SamplingMode::PerEgo;
  throw ConfigError("mode must be per_scene or per_ego, got \"" + text + "\"");
}

RunConfig load_config_file(const std::string& path, const RunConfig& defaults) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  njson j;
  try {
    j = njson::parse(in);
  } catch (const njson::exception& e) {
    throw ConfigError(path + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(path + ": config must be a JSON object");
  }

  RunConfig cfg = defaults;
  static const std::set<std::string> known = {
      "seed", "tau", "draws_per_scene", "mode",
      "filters", "radius", "min_displacement", "max_comfort_violations", "max_ttc_violations",
      "window",
      "max_accel_lon", "max_accel_lat", "max_jerk_lon", "max_jerk_lat", "max_yaw_rate",
      "max_yaw_accel", "combiner",
      "ttc_threshold", "ttc_epsilon", "ttc_lateral_margin", "ttc_prefilter_radius",
      "histogram_bins", "jobs", "lenient", "keep_original_ego",
  };
  try {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError(path + ": unknown config key \"" + key + "\"");
    }
    if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError("config: \"seed\" must be a non-negative integer");
      }
      cfg.sampling.seed = value.get<std::uint64_t>();
    } else if (key == "tau") {
      if (value.is_string()) {
        cfg.sampling.tau = parse_temperature(value.get<std::string>());
      } else if (value.is_number()) {
        cfg.sampling.tau = Temperature::of(need_positive(value, "tau"));
      } else {
        throw ConfigError("config: \"tau\" must be a positive number or \"uniform\"");
      }
    } else if (key == "draws_per_scene") {
      cfg.sampling.draws_per_scene = need_nonneg_int(value, "draws_per_scene");
    } else if (key == "mode") {
      cfg.sampling.mode = parse_sampling_mode(value.get<std::string>());
    } else if (key == "filters") {
      if (!value.is_array()) {
        throw ConfigError("config: \"filters\" must be an array of filter names");
      }
      std::string csv;
      for (const auto& f : value) {
        if (!csv.empty()) csv += ',';
        csv += f.get<std::string>();
      }
      cfg.filters.active = parse_filter_set(csv);
    } else if (key == "radius") {
      cfg.filters.radius = need_positive(value, "radius");
    } else if (key == "min_displacement") {
      if (!value.is_number()) throw ConfigError("config: \"min_displacement\" must be a number");
      cfg.filters.min_displacement = value.get<double>();
    } else if (key == "max_comfort_violations") {
      cfg.filters.max_comfort_violations = need_nonneg_int(value, "max_comfort_violations");
    } else if (key == "max_ttc_violations") {
      cfg.filters.max_ttc_violations = need_nonneg_int(value, "max_ttc_violations");
    } else if (key == "window") {
      const std::string w = value.get<std::string>();
      if (w == "history_only") cfg.filters.window = ObservabilityWindow::HistoryOnly;
      else if (w == "history_and_future") cfg.filters.window = ObservabilityWindow::HistoryAndFuture;
      else throw ConfigError("config: \"window\" must be history_only or history_and_future");
    } else if (key == "max_accel_lon") {
      cfg.comfort.max_accel_lon = need_positive(value, "max_accel_lon");
    } else if (key == "max_accel_lat") {
      cfg.comfort.max_accel_lat = need_positive(value, "max_accel_lat");
    } else if (key == "max_jerk_lon") {
      cfg.comfort.max_jerk_lon = need_positive(value, "max_jerk_lon");
    } else if (key == "max_jerk_lat") {
      cfg.comfort.max_jerk_lat = need_positive(value, "max_jerk_lat");
    } else if (key == "max_yaw_rate") {
      cfg.comfort.max_yaw_rate = need_positive(value, "max_yaw_rate");
    } else if (key == "max_yaw_accel") {
      cfg.comfort.max_yaw_accel = need_positive(value, "max_yaw_accel");
    } else if (key == "combiner") {
      const std::string c = value.get<std::string>();
      if (c == "all") cfg.comfort.combiner = ComfortCombiner::AllConditions;
      else if (c == "any") cfg.comfort.combiner = ComfortCombiner::AnyCondition;
      else throw ConfigError("config: \"combiner\" must be all or any");
    } else if (key == "ttc_threshold") {
      cfg.ttc.threshold = need_positive(value, "ttc_threshold");
    } else if (key == "ttc_epsilon") {
      cfg.ttc.epsilon = need_positive(value, "ttc_epsilon");
    } else if (key == "ttc_lateral_margin") {
      if (!value.is_number()) throw ConfigError("config: \"ttc_lateral_margin\" must be a number");
      cfg.ttc.lateral_margin = value.get<double>();
    } else if (key == "ttc_prefilter_radius") {
      if (!value.is_number()) {
        throw ConfigError("config: \"ttc_prefilter_radius\" must be a number");
      }
      cfg.ttc.prefilter_radius = value.get<double>();
    } else if (key == "histogram_bins") {
      cfg.histogram_bins = need_nonneg_int(value, "histogram_bins");
      if (cfg.histogram_bins < 2) {
        throw ConfigError("config: \"histogram_bins\" must be >= 2");
      }
    } else if (key == "jobs") {
      cfg.jobs = need_nonneg_int(value, "jobs");
    } else if (key == "lenient") {
      if (!value.is_boolean()) throw ConfigError("config: \"lenient\" must be a boolean");
      cfg.lenient = value.get<bool>();
    } else if (key == "keep_original_ego") {
      if (!value.is_boolean()) {
        throw ConfigError("config: \"keep_original_ego\" must be a boolean");
      }
      cfg.keep_original_ego = value.get<bool>();
    }
  }
  } catch (const njson::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return cfg;
}

std::string config_echo_json(const RunConfig& cfg) {
  std::string out = "{\"seed\":" + std::to_string(cfg.sampling.seed);
  out += ",\"tau\":";
  if (cfg.sampling.tau.uniform) {
    out += "\"uniform\"";
  } else {
    append_double(out, cfg.sampling.tau.value);
  }
  out += ",\"draws_per_scene\":" + std::to_string(cfg.sampling.draws_per_scene);
  out += ",\"mode\":\"";
  out += cfg.sampling.mode == SamplingMode::PerScene ? "per_scene" : "per_ego";
  out += "\",\"filters\":[";
  bool first = true;
  auto add_filter = [&](bool on, const char* name) {
    if (!on) return;
    if (!first) out += ',';
    first = false;
    out += '"';
    out += name;
    out += '"';
  };
  add_filter(cfg.filters.active.displacement, "disp");
  add_filter(cfg.filters.active.comfort, "comf");
  add_filter(cfg.filters.active.ttc, "ttc");
  out += "],\"radius\":";
  append_double(out, cfg.filters.radius);
  out += ",\"min_displacement\":";
  append_double(out, cfg.filters.min_displacement);
  out += ",\"max_comfort_violations\":" + std::to_string(cfg.filters.max_comfort_violations);
  out += ",\"max_ttc_violations\":" + std::to_string(cfg.filters.max_ttc_violations);
  out += ",\"window\":\"";
  out += cfg.filters.window == ObservabilityWindow::HistoryOnly ? "history_only"
                                                                : "history_and_future";
  out += "\",\"comfort\":{\"max_accel_lon\":";
  append_double(out, cfg.comfort.max_accel_lon);
  out += ",\"max_accel_lat\":";
  append_double(out, cfg.comfort.max_accel_lat);
  out += ",\"max_jerk_lon\":";
  append_double(out, cfg.comfort.max_jerk_lon);
  out += ",\"max_jerk_lat\":";
  append_double(out, cfg.comfort.max_jerk_lat);
  out += ",\"max_yaw_rate\":";
  append_double(out, cfg.comfort.max_yaw_rate);
  out += ",\"max_yaw_accel\":";
  append_double(out, cfg.comfort.max_yaw_accel);
  out += ",\"combiner\":\"";
  out += cfg.comfort.combiner == ComfortCombiner::AllConditions ? "all" : "any";
  out += "\"},\"ttc\":{\"threshold\":";
  append_double(out, cfg.ttc.threshold);
  out += ",\"epsilon\":";
  append_double(out, cfg.ttc.epsilon);
  out += ",\"lateral_margin\":";
  append_double(out, cfg.ttc.lateral_margin);
  out += ",\"prefilter_radius\":";
  append_double(out, cfg.ttc.prefilter_radius);
  out += "},\"histogram_bins\":" + std::to_string(cfg.histogram_bins);
  out += ",\"lenient\":";
  out += cfg.lenient ? "true" : "false";
  out += ",\"keep_original_ego\":";
  out += cfg.keep_original_ego ? "true" : "false";
  out += ",\"replay\":";
  out += cfg.replay_plan.empty() ? "false" : "true";
  out += '}';
  return out;
}

}  // namespace scenaug
