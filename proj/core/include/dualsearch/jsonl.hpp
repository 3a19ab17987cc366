#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dualsearch {

using json = nlohmann::json;

/// Reads a line-delimited JSON file. Blank lines are skipped; a bad line
/// raises MalformedStream with the 1-based line number.
std::vector<json> read_jsonl(const std::filesystem::path& path);

/// Single-writer line-delimited JSON output. Streams record by record;
/// never buffers the whole file.
class JsonlWriter {
public:
  explicit JsonlWriter(const std::filesystem::path& path);

  void write(const json& record);
  void write_line(const std::string& line);
  void flush();

private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace dualsearch
