#include "xfpt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "xfpt/errors.hpp"

namespace xfpt {

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real(const std::string& token) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw NumericalError("cannot parse real from '" + token + "'");
  }
  while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) {
    ++pos;
  }
  if (pos != token.size()) {
    throw NumericalError("trailing characters in real '" + token + "'");
  }
  return v;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw NumericalError("csv: no column named '" + name + "'");
}

double CsvTable::real(std::size_t row, const std::string& name) const {
  return parse_real(rows.at(row).at(column(name)));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw NumericalError("cannot open " + tmp.string() + " for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
      throw NumericalError("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  row(header);
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw NumericalError("csv: row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      buffer_ += ',';
    }
    buffer_ += cells[i];
  }
  buffer_ += '\n';
  return *this;
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) {
    cells.push_back(format_real(v));
  }
  return row(cells);
}

std::string CsvWriter::str() const { return buffer_; }

void CsvWriter::write(const std::filesystem::path& path) const { write_text_atomic(path, buffer_); }

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw NumericalError("cannot open " + path.string());
  }
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace xfpt
