#include "dualsearch/jsonl.hpp"

#include "dualsearch/errors.hpp"

namespace dualsearch {

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<json> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw MalformedStream(path.string() + ":" + std::to_string(lineno) +
                            ": invalid JSON record");
    }
    records.push_back(std::move(parsed));
  }
  return records;
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : path_(path.string()) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path, std::ios::trunc);
  if (!out_) {
    throw IoError("cannot open " + path_ + " for writing");
  }
}

void JsonlWriter::write(const json& record) { write_line(record.dump()); }

void JsonlWriter::write_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_) {
    throw IoError("write failed: " + path_);
  }
}

void JsonlWriter::flush() { out_.flush(); }

}  // namespace dualsearch
