// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace wdmtwin {

/// Fixed 6-decimal formatting with '.' decimal separator; non-finite values
/// map to "-inf"/"inf"/"nan" markers.
std::string format_fixed(double v);
double parse_double(const std::string& s);

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writer with '\n' line endings and '#' comment lines.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void comment(const std::string& text);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

/// Standard first comment lines: tool version plus config/model hashes.
void write_standard_comments(CsvWriter& w, std::uint64_t config_hash,
                             std::uint64_t model_hash);

std::string read_file(const std::filesystem::path& path);
std::uint64_t hash_of_file(const std::filesystem::path& path);

}  // namespace wdmtwin
