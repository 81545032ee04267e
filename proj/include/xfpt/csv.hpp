#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace xfpt {

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_real(double v);

/// Parses a real written by format_real (accepts "inf"/"infinity").
double parse_real(const std::string& token);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double real(std::size_t row, const std::string& name) const;
};

/// Writes to `path` via a temporary sibling file and an atomic rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& row(const std::vector<std::string>& cells);
  CsvWriter& row(const std::vector<double>& values);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t width_;
  std::string buffer_;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace xfpt
