#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "scenaug/corpus_io.hpp"
#include "scenaug/errors.hpp"
#include "test_support.hpp"

using namespace scenaug;
using namespace scenaug::testutil;

namespace {

// A scene exercising every serialized field: all categories, an unobserved
// state, obstacles, both drivable layers, context, augmented provenance, and
// strings that need JSON escaping.
SceneRecord awkward_scene() {
  SceneRecord s;
  s.scene_id = "run \"7\"\\city\ttab";
  s.dt = 0.25;
  s.history_len = 2;
  s.future_len = 1;
  s.ego = constant_track("ego \u00e9", {0.0, 0.0}, {1.5, 0.0}, 3);
  s.agents.push_back(constant_track("walker", {4.0, -1.0}, {0.0, 1.0}, 3, 0.1, 1.0,
                                    AgentCategory::Pedestrian));
  s.agents.push_back(constant_track("rider", {-2.0, 3.0}, {2.0, 0.0}, 3, 0.1, 0.0,
                                    AgentCategory::Bicycle));
  s.agents.push_back(constant_track("cone", {1.0, 1.0}, {0.0, 0.0}, 3, 0.1, 0.0,
                                    AgentCategory::Static));
  s.agents[0].states[1] = AgentState{};  // unobserved gap mid-track
  s.obstacles.push_back({{7.5, -3.25}, 0.5, 2.0, 1.0});
  s.drivable.polygons = {{{-10.0, -10.0}, {10.0, -10.0}, {10.0, 10.0}, {-10.0, 10.0}},
                         {{20.0, 0.0}, {30.0, 0.0}, {25.0, 5.0}}};
  s.drivable.polylines = {{{-10.0, 0.0}, {10.0, 0.0}}};
  s.context["weather"] = "rain\nheavy";
  s.context["city"] = "k\u00f8benhavn";
  s.provenance.augmented = true;
  s.provenance.source_scene_id = "base#1";
  s.provenance.source_agent_id = "walker";
  return s;
}

void check_same_scene(const SceneRecord& a, const SceneRecord& b) {
  CHECK(a.scene_id == b.scene_id);
  CHECK(a.dt == b.dt);
  CHECK(a.history_len == b.history_len);
  CHECK(a.future_len == b.future_len);
  REQUIRE(a.agents.size() == b.agents.size());
  for (std::size_t i = 0; i <= a.agents.size(); ++i) {
    const AgentTrack& ta = i == 0 ? a.ego : a.agents[i - 1];
    const AgentTrack& tb = i == 0 ? b.ego : b.agents[i - 1];
    CHECK(ta.agent_id == tb.agent_id);
    CHECK(ta.category == tb.category);
    REQUIRE(ta.states.size() == tb.states.size());
    for (std::size_t t = 0; t < ta.states.size(); ++t) {
      CHECK(ta.states[t].position.x == tb.states[t].position.x);
      CHECK(ta.states[t].position.y == tb.states[t].position.y);
      CHECK(ta.states[t].heading == tb.states[t].heading);
      CHECK(ta.states[t].velocity.x == tb.states[t].velocity.x);
      CHECK(ta.states[t].velocity.y == tb.states[t].velocity.y);
      CHECK(ta.states[t].length == tb.states[t].length);
      CHECK(ta.states[t].width == tb.states[t].width);
      CHECK(ta.states[t].observed == tb.states[t].observed);
    }
  }
  REQUIRE(a.obstacles.size() == b.obstacles.size());
  for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
    CHECK(a.obstacles[i].position.x == b.obstacles[i].position.x);
    CHECK(a.obstacles[i].position.y == b.obstacles[i].position.y);
    CHECK(a.obstacles[i].heading == b.obstacles[i].heading);
    CHECK(a.obstacles[i].length == b.obstacles[i].length);
    CHECK(a.obstacles[i].width == b.obstacles[i].width);
  }
  auto check_points = [](const std::vector<std::vector<Vec2>>& pa,
                         const std::vector<std::vector<Vec2>>& pb) {
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      REQUIRE(pa[i].size() == pb[i].size());
      for (std::size_t k = 0; k < pa[i].size(); ++k) {
        CHECK(pa[i][k].x == pb[i][k].x);
        CHECK(pa[i][k].y == pb[i][k].y);
      }
    }
  };
  check_points(a.drivable.polygons, b.drivable.polygons);
  check_points(a.drivable.polylines, b.drivable.polylines);
  CHECK(a.context == b.context);
  CHECK(a.provenance.augmented == b.provenance.augmented);
  CHECK(a.provenance.source_scene_id == b.provenance.source_scene_id);
  CHECK(a.provenance.source_agent_id == b.provenance.source_agent_id);
}

}  // namespace

TEST_CASE("scene line round trip preserves every field") {
  const SceneRecord scene = awkward_scene();
  const std::string line = scene_to_line(scene);
  CHECK(line.find('\n') == std::string::npos);  // one scene, one line
  const SceneRecord back = parse_scene_line(line, "t");
  check_same_scene(scene, back);
  // Shortest round-trip numbers: rewriting an unchanged scene is stable.
  CHECK(scene_to_line(back) == line);
}

TEST_CASE("original provenance and awkward doubles survive") {
  SceneRecord scene = base_scene(3);
  scene.ego.states[1].position.x = 0.1 + 0.2;         // 0.30000000000000004
  scene.ego.states[2].velocity.y = -1.0 / 3.0;
  scene.ego.states[2].heading = 3.141592653589793;
  const SceneRecord back = parse_scene_line(scene_to_line(scene), "t");
  check_same_scene(scene, back);
  CHECK_FALSE(back.provenance.augmented);
  CHECK(back.provenance.source_scene_id.empty());
}

TEST_CASE("scene parse errors carry the caller's location prefix") {
  auto fails_with = [](const std::string& line, const std::string& fragment) {
    try {
      parse_scene_line(line, "corpus.jsonl:17");
      FAIL_CHECK("expected DataError for: " << fragment);
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("corpus.jsonl:17") == 0);
      CHECK(msg.find(fragment) != std::string::npos);
    }
  };

  fails_with("{not json", "malformed JSON");
  fails_with("[1,2]", "must be an object");

  const std::string valid = scene_to_line(awkward_scene());
  auto corrupted = [&](const std::string& from, const std::string& to) {
    std::string s = valid;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
  };
  fails_with(corrupted("\"dt\":0.25", "\"dt\":\"fast\""), "non-numeric \"dt\"");
  fails_with(corrupted("\"history_len\":2", "\"history_len\":2.5"), "non-integer");
  fails_with(corrupted("\"category\":\"pedestrian\"", "\"category\":\"robot\""),
             "unknown category \"robot\"");
  fails_with(corrupted("\"kind\":\"augmented\"", "\"kind\":\"remix\""),
             ".provenance: unknown kind \"remix\"");
  fails_with(corrupted("[7.5,-3.25,0.5,2,1]", "[7.5,-3.25,0.5,2]"),
             "obstacle must be [x, y, heading, length, width]");
  fails_with(corrupted("\"scene_id\":", "\"scene\":"), "missing or non-string \"scene_id\"");

  // State arrays must have exactly 8 numeric entries.
  std::string scene_json = valid;
  const std::string ego_state = "[0,0,0,1.5,0,4.5,2,1]";
  const auto pos = scene_json.find(ego_state);
  REQUIRE(pos != std::string::npos);
  scene_json.replace(pos, ego_state.size(), "[0,0,0,1.5,0,4.5,2]");
  fails_with(scene_json, "state must be an 8-element array");
  scene_json = valid;
  scene_json.replace(pos, ego_state.size(), "[0,0,0,1.5,\"fast\",4.5,2,1]");
  fails_with(scene_json, "non-numeric state entry");
}

TEST_CASE("header line round trip with tags") {
  CorpusHeader h;
  h.dt = 0.05;
  h.history_len = 11;
  h.future_len = 40;
  h.tags["source"] = "sim v2";
  h.tags["note"] = "q\"uote";
  CHECK(header_to_line(h) ==
        "{\"format_version\":1,\"dt\":0.05,\"history_len\":11,\"future_len\":40,"
        "\"tags\":{\"note\":\"q\\\"uote\",\"source\":\"sim v2\"}}");

  const std::string dir = temp_dir();
  const std::string path = dir + "/tagged.jsonl";
  write_corpus(path, h, {});
  CorpusReader reader(path);
  CHECK(reader.header().format_version == 1);
  CHECK(reader.header().dt == 0.05);
  CHECK(reader.header().history_len == 11);
  CHECK(reader.header().future_len == 40);
  CHECK(reader.header().tags == h.tags);
  CHECK_FALSE(reader.next_line().has_value());
}

TEST_CASE("reader rejects missing, empty, and malformed files") {
  const std::string dir = temp_dir();
  CHECK_THROWS_AS(CorpusReader(dir + "/nope.jsonl"), IoError);

  const std::string empty = dir + "/empty.jsonl";
  write_text_file(empty, "");
  try {
    CorpusReader reader(empty);
    FAIL_CHECK("expected DataError for empty file");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("empty file, expected a header line") !=
          std::string::npos);
  }

  const std::string garbled = dir + "/garbled.jsonl";
  write_text_file(garbled, "not a header\n");
  try {
    CorpusReader reader(garbled);
    FAIL_CHECK("expected DataError for malformed header");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(garbled + ":1") != std::string::npos);
    CHECK(msg.find("malformed header") != std::string::npos);
  }

  const std::string future = dir + "/future.jsonl";
  write_text_file(future,
                  "{\"format_version\":2,\"dt\":0.1,\"history_len\":21,\"future_len\":80,"
                  "\"tags\":{}}\n");
  try {
    CorpusReader reader(future);
    FAIL_CHECK("expected DataError for future format_version");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("unsupported format_version 2") != std::string::npos);
  }
}

TEST_CASE("reader skips blank lines but keeps physical line numbers") {
  const std::string dir = temp_dir();
  const std::string path = dir + "/gappy.jsonl";
  const SceneRecord scene = base_scene(3);
  write_text_file(path, header_to_line(CorpusHeader{}) + "\n\n\n" + scene_to_line(scene) +
                            "\n\n{broken\n");

  CorpusReader reader(path);
  auto first = reader.next_line();
  REQUIRE(first.has_value());
  CHECK(first->line_no == 4);
  check_same_scene(parse_scene_line(first->text, "t"), scene);

  // The broken line sits on physical line 6 and the error says so.
  try {
    reader.next_scene();
    FAIL_CHECK("expected DataError for broken scene line");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(path + ":6") == 0);
  }
  CHECK_FALSE(reader.next_line().has_value());
}

TEST_CASE("writer publishes atomically via tmp + rename") {
  namespace fs = std::filesystem;
  const std::string dir = temp_dir();
  const std::string path = dir + "/out.jsonl";
  const SceneRecord scene = base_scene(3);

  {
    CorpusWriter writer(path, CorpusHeader{});
    writer.write_scene(scene);
    CHECK(writer.scenes_written() == 1);
    writer.write_scene(scene);
    CHECK(writer.scenes_written() == 2);
    CHECK_FALSE(fs::exists(path));       // nothing published before commit
    CHECK(fs::exists(path + ".tmp"));
    writer.commit();
    CHECK(fs::exists(path));
    CHECK_FALSE(fs::exists(path + ".tmp"));
  }
  CHECK(read_corpus(path).size() == 2);

  // An uncommitted writer leaves no trace, and the published file survives.
  const std::string before = read_file(path);
  {
    CorpusWriter writer(path, CorpusHeader{});
    writer.write_scene(scene);
  }
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK(read_file(path) == before);
}

TEST_CASE("whole-corpus round trip is byte stable") {
  const std::string dir = temp_dir();
  const std::string first = dir + "/first.jsonl";
  const std::string second = dir + "/second.jsonl";

  std::vector<SceneRecord> scenes = {awkward_scene(), base_scene(3)};
  scenes[1].scene_id = "plain";
  CorpusHeader header;
  header.dt = 0.25;
  header.history_len = 2;
  header.future_len = 1;
  write_corpus(first, header, scenes);

  CorpusHeader got;
  const std::vector<SceneRecord> back = read_corpus(first, &got);
  REQUIRE(back.size() == 2);
  check_same_scene(back[0], scenes[0]);
  check_same_scene(back[1], scenes[1]);
  CHECK(got.dt == header.dt);

  write_corpus(second, got, back);
  CHECK(read_file(second) == read_file(first));
}

TEST_CASE("write_text_file overwrites in place") {
  const std::string dir = temp_dir();
  const std::string path = dir + "/note.txt";
  write_text_file(path, "one\n");
  CHECK(read_file(path) == "one\n");
  write_text_file(path, "two\n");
  CHECK(read_file(path) == "two\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}
