#include "fpt/io/csv.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt::io {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> header)
    : path_(std::move(path)) {
  bool first = true;
  for (const auto& h : header) append(body_, first, h);
  body_ += '\n';
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::commit() {
  if (committed_) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(body_.data(), static_cast<std::streamsize>(body_.size()));
    if (!out) throw ConfigError(fmt::format("short write to '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path_);
  committed_ = true;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) table.rows.push_back(split(line));
  }
  return table;
}

}  // namespace fpt::io
