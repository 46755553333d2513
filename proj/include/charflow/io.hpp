#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace charflow {

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

/// Minimal CSV writer: a header line, then rows of doubles.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  /// Row with a leading text cell.
  void row(const std::string& label, const std::vector<double>& values);
  void raw(const std::string& line);

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace charflow
