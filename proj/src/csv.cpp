#include "betaflow/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace betaflow {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path),
      columns_(columns.size()) {
  if (!out_) throw std::ios_base::failure("cannot open for writing: " + path);
  if (columns.empty()) throw std::invalid_argument("csv: need at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("csv: row width " + std::to_string(values.size()) +
                                " != header width " + std::to_string(columns_));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("csv: row width " + std::to_string(cells.size()) +
                                " != header width " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  if (!out_.is_open()) return;
  out_.flush();
  if (!out_) throw std::ios_base::failure("write failed: " + path_);
  out_.close();
}

}  // namespace betaflow
