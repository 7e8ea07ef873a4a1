#pragma once

/// \file csv.hpp
/// \brief CSV emission: fixed headers, 17 significant digits, atomic
/// write-then-rename on commit.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fpt/types.hpp"

namespace fpt::io {

std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::string line;
    bool first = true;
    (append(line, first, cells), ...);
    line += '\n';
    body_ += line;
    ++rows_;
  }

  std::size_t rows() const { return rows_; }
  /// Writes `<path>.tmp` and renames it over `path`.
  void commit();

 private:
  static void sep(std::string& line, bool& first) {
    if (!first) line += ',';
    first = false;
  }
  static void append(std::string& line, bool& first, double v) {
    sep(line, first);
    line += format_double(v);
  }
  static void append(std::string& line, bool& first, std::size_t v) {
    sep(line, first);
    line += std::to_string(v);
  }
  static void append(std::string& line, bool& first, int v) {
    sep(line, first);
    line += std::to_string(v);
  }
  static void append(std::string& line, bool& first, std::string_view v) {
    sep(line, first);
    line += v;
  }
  static void append(std::string& line, bool& first, const char* v) {
    append(line, first, std::string_view(v));
  }
  static void append(std::string& line, bool& first, const std::string& v) {
    append(line, first, std::string_view(v));
  }
  static void append(std::string& line, bool& first, const Vec6& v) {
    for (int i = 0; i < 6; ++i) append(line, first, v(i));
  }

  std::filesystem::path path_;
  std::string body_;
  std::size_t rows_ = 0;
  bool committed_ = false;
};

/// Reads a CSV written by CsvWriter: header + rows of raw cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace fpt::io
