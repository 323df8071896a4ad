// JSONL corpus files: one header line, then one scene per line.
//
// Scene lines are self-contained JSON objects; agent states are compact
// arrays [x, y, heading, vx, vy, length, width, observed]. Numbers use
// shortest round-trip formatting, so rewriting an unchanged scene reproduces
// its bytes.
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenaug/scenario.hpp"

namespace scenaug {

inline constexpr int kFormatVersion = 1;

struct CorpusHeader {
  int format_version = kFormatVersion;
  double dt = 0.1;
  int history_len = 21;
  int future_len = 80;
  std::map<std::string, std::string> tags;
};

std::string header_to_line(const CorpusHeader& header);

// Serialization used for every scene written anywhere in the pipeline.
std::string scene_to_line(const SceneRecord& scene);

// Parses one scene line. DataError on malformed JSON or schema mismatches;
// `where` is prefixed to messages (e.g. "corpus.jsonl:17").
SceneRecord parse_scene_line(const std::string& line, const std::string& where);

// Streaming reader. Opens the file and parses the header eagerly (IoError /
// DataError).
class CorpusReader {
 public:
  explicit CorpusReader(const std::string& path);

  const CorpusHeader& header() const { return header_; }
  const std::string& path() const { return path_; }

  // Next non-empty line; line_no is 1-based over the physical file.
  struct RawLine {
    std::uint64_t line_no = 0;
    std::string text;
  };
  std::optional<RawLine> next_line();

  // Convenience: next parsed scene.
  std::optional<SceneRecord> next_scene();

 private:
  std::string path_;
  std::ifstream in_;
  CorpusHeader header_;
  std::uint64_t line_no_ = 0;
};

// Streaming writer with atomic publication: writes to "<path>.tmp" and
// renames on commit(), so readers never observe a partial corpus. Without
// commit() the temporary is removed.
class CorpusWriter {
 public:
  CorpusWriter(const std::string& path, const CorpusHeader& header);
  ~CorpusWriter();

  CorpusWriter(const CorpusWriter&) = delete;
  CorpusWriter& operator=(const CorpusWriter&) = delete;

  void write_line(const std::string& line);  // line has no trailing newline
  void write_scene(const SceneRecord& scene);

  std::uint64_t scenes_written() const { return scenes_written_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  std::uint64_t scenes_written_ = 0;
  bool committed_ = false;
};

// Whole-file convenience wrappers used by tests and small corpora.
std::vector<SceneRecord> read_corpus(const std::string& path, CorpusHeader* header = nullptr);
void write_corpus(const std::string& path, const CorpusHeader& header,
                  std::span<const SceneRecord> scenes);

// Atomic small-file write (same tmp + rename protocol).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace scenaug
