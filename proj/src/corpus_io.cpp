#include "scenaug/corpus_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <system_error>

#include <json.hpp>

#include "scenaug/errors.hpp"

namespace scenaug {
namespace {

using njson = nlohmann::json;

// Serialization is hand-rolled: shortest round-trip numbers via to_chars and
// a fixed key order, so identical records always produce identical bytes.
void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_int(std::string& out, long long v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_string(std::string& out, const std::string& s) {
  out += njson(s).dump();  // JSON escaping
}

void append_state(std::string& out, const AgentState& s) {
  out += '[';
  append_double(out, s.position.x);
  out += ',';
  append_double(out, s.position.y);
  out += ',';
  append_double(out, s.heading);
  out += ',';
  append_double(out, s.velocity.x);
  out += ',';
  append_double(out, s.velocity.y);
  out += ',';
  append_double(out, s.length);
  out += ',';
  append_double(out, s.width);
  out += ',';
  out += s.observed ? '1' : '0';
  out += ']';
}

void append_track(std::string& out, const AgentTrack& track) {
  out += "{\"id\":";
  append_string(out, track.agent_id);
  out += ",\"category\":\"";
  out += to_string(track.category);
  out += "\",\"states\":[";
  for (std::size_t t = 0; t < track.states.size(); ++t) {
    if (t) out += ',';
    append_state(out, track.states[t]);
  }
  out += "]}";
}

void append_points(std::string& out, const std::vector<Vec2>& points) {
  out += '[';
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ',';
    out += '[';
    append_double(out, points[i].x);
    out += ',';
    append_double(out, points[i].y);
    out += ']';
  }
  out += ']';
}

void append_string_map(std::string& out, const std::map<std::string, std::string>& m) {
  out += '{';
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) out += ',';
    first = false;
    append_string(out, k);
    out += ':';
    append_string(out, v);
  }
  out += '}';
}

double need_double(const njson& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw DataError(where + ": missing or non-numeric \"" + key + "\"");
  }
  return it->get<double>();
}

int need_int(const njson& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw DataError(where + ": missing or non-integer \"" + key + "\"");
  }
  return it->get<int>();
}

std::string need_string(const njson& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DataError(where + ": missing or non-string \"" + key + "\"");
  }
  return it->get<std::string>();
}

const njson& need_node(const njson& j, const char* key, njson::value_t type,
                       const char* type_name, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->type() != type) {
    throw DataError(where + ": missing or non-" + type_name + " \"" + key + "\"");
  }
  return *it;
}

AgentState parse_state(const njson& j, const std::string& where) {
  if (!j.is_array() || j.size() != 8) {
    throw DataError(where + ": state must be an 8-element array");
  }
  for (const auto& v : j) {
    if (!v.is_number()) throw DataError(where + ": non-numeric state entry");
  }
  AgentState s;
  s.position = {j[0].get<double>(), j[1].get<double>()};
  s.heading = j[2].get<double>();
  s.velocity = {j[3].get<double>(), j[4].get<double>()};
  s.length = j[5].get<double>();
  s.width = j[6].get<double>();
  s.observed = j[7].get<double>() != 0.0;
  return s;
}

AgentTrack parse_track(const njson& j, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": track must be an object");
  AgentTrack track;
  track.agent_id = need_string(j, "id", where);
  const std::string cat = need_string(j, "category", where);
  if (!category_from_string(cat, &track.category)) {
    throw DataError(where + ": unknown category \"" + cat + "\"");
  }
  const njson& states = need_node(j, "states", njson::value_t::array, "array", where);
  track.states.reserve(states.size());
  for (std::size_t t = 0; t < states.size(); ++t) {
    track.states.push_back(parse_state(states[t], where + ".states[" + std::to_string(t) + "]"));
  }
  return track;
}

std::vector<Vec2> parse_points(const njson& j, const std::string& where) {
  std::vector<Vec2> points;
  points.reserve(j.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw DataError(where + ": point must be [x, y]");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return points;
}

std::map<std::string, std::string> parse_string_map(const njson& j, const std::string& where) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw DataError(where + ": values must be strings");
    m.emplace(k, v.get<std::string>());
  }
  return m;
}

}  // namespace

std::string header_to_line(const CorpusHeader& header) {
  std::string out = "{\"format_version\":";
  append_int(out, header.format_version);
  out += ",\"dt\":";
  append_double(out, header.dt);
  out += ",\"history_len\":";
  append_int(out, header.history_len);
  out += ",\"future_len\":";
  append_int(out, header.future_len);
  out += ",\"tags\":";
  append_string_map(out, header.tags);
  out += '}';
  return out;
}

std::string scene_to_line(const SceneRecord& scene) {
  std::string out;
  out.reserve(512 + 96 * scene.horizon() * (scene.agents.size() + 1));
  out += "{\"scene_id\":";
  append_string(out, scene.scene_id);
  out += ",\"dt\":";
  append_double(out, scene.dt);
  out += ",\"history_len\":";
  append_int(out, scene.history_len);
  out += ",\"future_len\":";
  append_int(out, scene.future_len);
  out += ",\"ego\":";
  append_track(out, scene.ego);
  out += ",\"agents\":[";
  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    if (i) out += ',';
    append_track(out, scene.agents[i]);
  }
  out += "],\"obstacles\":[";
  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    if (i) out += ',';
    const StaticObstacle& o = scene.obstacles[i];
    out += '[';
    append_double(out, o.position.x);
    out += ',';
    append_double(out, o.position.y);
    out += ',';
    append_double(out, o.heading);
    out += ',';
    append_double(out, o.length);
    out += ',';
    append_double(out, o.width);
    out += ']';
  }
  out += "],\"drivable\":{\"polygons\":[";
  for (std::size_t i = 0; i < scene.drivable.polygons.size(); ++i) {
    if (i) out += ',';
    append_points(out, scene.drivable.polygons[i]);
  }
  out += "],\"polylines\":[";
  for (std::size_t i = 0; i < scene.drivable.polylines.size(); ++i) {
    if (i) out += ',';
    append_points(out, scene.drivable.polylines[i]);
  }
  out += "]},\"context\":";
  append_string_map(out, scene.context);
  out += ",\"provenance\":";
  if (scene.provenance.augmented) {
    out += "{\"kind\":\"augmented\",\"source_scene_id\":";
    append_string(out, scene.provenance.source_scene_id);
    out += ",\"source_agent_id\":";
    append_string(out, scene.provenance.source_agent_id);
    out += '}';
  } else {
    out += "{\"kind\":\"original\"}";
  }
  out += '}';
  return out;
}

SceneRecord parse_scene_line(const std::string& line, const std::string& where) {
  njson j;
  try {
    j = njson::parse(line);
  } catch (const njson::exception& e) {
    throw DataError(where + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw DataError(where + ": scene line must be an object");
  try {
    SceneRecord scene;
    scene.scene_id = need_string(j, "scene_id", where);
    scene.dt = need_double(j, "dt", where);
    scene.history_len = need_int(j, "history_len", where);
    scene.future_len = need_int(j, "future_len", where);
    scene.ego = parse_track(need_node(j, "ego", njson::value_t::object, "object", where),
                            where + ".ego");
    const njson& agents = need_node(j, "agents", njson::value_t::array, "array", where);
    scene.agents.reserve(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      scene.agents.push_back(
          parse_track(agents[i], where + ".agents[" + std::to_string(i) + "]"));
    }
    const njson& obstacles = need_node(j, "obstacles", njson::value_t::array, "array", where);
    for (const auto& o : obstacles) {
      if (!o.is_array() || o.size() != 5) {
        throw DataError(where + ": obstacle must be [x, y, heading, length, width]");
      }
      StaticObstacle ob;
      ob.position = {o[0].get<double>(), o[1].get<double>()};
      ob.heading = o[2].get<double>();
      ob.length = o[3].get<double>();
      ob.width = o[4].get<double>();
      scene.obstacles.push_back(ob);
    }
    const njson& drivable = need_node(j, "drivable", njson::value_t::object, "object", where);
    const njson& polygons =
        need_node(drivable, "polygons", njson::value_t::array, "array", where + ".drivable");
    for (std::size_t i = 0; i < polygons.size(); ++i) {
      scene.drivable.polygons.push_back(
          parse_points(polygons[i], where + ".drivable.polygons[" + std::to_string(i) + "]"));
    }
    const njson& polylines =
        need_node(drivable, "polylines", njson::value_t::array, "array", where + ".drivable");
    for (std::size_t i = 0; i < polylines.size(); ++i) {
      scene.drivable.polylines.push_back(
          parse_points(polylines[i], where + ".drivable.polylines[" + std::to_string(i) + "]"));
    }
    if (auto it = j.find("context"); it != j.end() && it->is_object()) {
      scene.context = parse_string_map(*it, where + ".context");
    }
    const njson& prov = need_node(j, "provenance", njson::value_t::object, "object", where);
    const std::string kind = need_string(prov, "kind", where + ".provenance");
    if (kind == "augmented") {
      scene.provenance.augmented = true;
      scene.provenance.source_scene_id = need_string(prov, "source_scene_id", where);
      scene.provenance.source_agent_id = need_string(prov, "source_agent_id", where);
    } else if (kind != "original") {
      throw DataError(where + ".provenance: unknown kind \"" + kind + "\"");
    }
    return scene;
  } catch (const njson::exception& e) {
    throw DataError(where + ": " + e.what());
  }
}

CorpusReader::CorpusReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) {
    throw IoError("cannot open corpus file: " + path);
  }
  std::string first;
  if (!std::getline(in_, first)) {
    throw DataError(path + ": empty file, expected a header line");
  }
  line_no_ = 1;
  njson j;
  try {
    j = njson::parse(first);
  } catch (const njson::exception& e) {
    throw DataError(path + ":1: malformed header: " + e.what());
  }
  const std::string where = path + ":1";
  header_.format_version = need_int(j, "format_version", where);
  if (header_.format_version != kFormatVersion) {
    throw DataError(where + ": unsupported format_version " +
                    std::to_string(header_.format_version));
  }
  header_.dt = need_double(j, "dt", where);
  header_.history_len = need_int(j, "history_len", where);
  header_.future_len = need_int(j, "future_len", where);
  if (auto it = j.find("tags"); it != j.end() && it->is_object()) {
    header_.tags = parse_string_map(*it, where + ".tags");
  }
}

std::optional<CorpusReader::RawLine> CorpusReader::next_line() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.empty()) continue;
    return RawLine{line_no_, std::move(line)};
  }
  if (in_.bad()) {
    throw IoError("read error on " + path_);
  }
  return std::nullopt;
}

std::optional<SceneRecord> CorpusReader::next_scene() {
  auto raw = next_line();
  if (!raw) return std::nullopt;
  return parse_scene_line(raw->text, path_ + ":" + std::to_string(raw->line_no));
}

CorpusWriter::CorpusWriter(const std::string& path, const CorpusHeader& header)
    : path_(path), tmp_path_(path + ".tmp"), out_(tmp_path_, std::ios::trunc) {
  if (!out_) {
    throw IoError("cannot open output file: " + tmp_path_);
  }
  out_ << header_to_line(header) << '\n';
  if (!out_) {
    throw IoError("write error on " + tmp_path_);
  }
}

CorpusWriter::~CorpusWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void CorpusWriter::write_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_) {
    throw IoError("write error on " + tmp_path_);
  }
  ++scenes_written_;
}

void CorpusWriter::write_scene(const SceneRecord& scene) { write_line(scene_to_line(scene)); }

void CorpusWriter::commit() {
  out_.flush();
  if (!out_) {
    throw IoError("write error on " + tmp_path_);
  }
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_path_, path_, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp_path_ + " to " + path_ + ": " + ec.message());
  }
  committed_ = true;
}

std::vector<SceneRecord> read_corpus(const std::string& path, CorpusHeader* header) {
  CorpusReader reader(path);
  if (header != nullptr) *header = reader.header();
  std::vector<SceneRecord> scenes;
  while (auto scene = reader.next_scene()) {
    scenes.push_back(std::move(*scene));
  }
  return scenes;
}

void write_corpus(const std::string& path, const CorpusHeader& header,
                  std::span<const SceneRecord> scenes) {
  CorpusWriter writer(path, header);
  for (const SceneRecord& scene : scenes) writer.write_scene(scene);
  writer.commit();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw IoError("write error on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace scenaug
