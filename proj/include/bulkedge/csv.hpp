#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bulkedge {

// Shortest round-trip decimal form.
std::string format_double(double v);

using CsvCell = std::variant<double, long long, int, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(std::initializer_list<CsvCell> cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

// Reads a CSV written by CsvWriter; first row is the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace bulkedge
