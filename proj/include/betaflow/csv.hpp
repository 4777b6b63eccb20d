// betaflow: CSV output with round-trip double formatting.
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace betaflow {

// %.17g: enough digits that reading the text back recovers the exact double.
std::string format_double(double v);

class CsvWriter {
 public:
  // Opens the file, truncating, and writes the header row.
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  // One row of doubles, formatted with format_double. Cell count must match
  // the header.
  void row(const std::vector<double>& values);

  // One row of preformatted cells (for mixed text/number tables).
  void row_raw(const std::vector<std::string>& cells);

  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace betaflow
