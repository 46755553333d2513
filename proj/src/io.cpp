#include "charflow/io.hpp"

#include <charconv>
#include <cmath>

#include "charflow/error.hpp"
#include "charflow/snapshot.hpp"

namespace charflow {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path), path_(path) {
  if (!out_) throw Error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
  if (!out_) throw Error("write failed on " + path_);
}

void CsvWriter::row(const std::string& label, const std::vector<double>& values) {
  out_ << label;
  for (double v : values) out_ << ',' << format_double(v);
  out_ << '\n';
  if (!out_) throw Error("write failed on " + path_);
}

void CsvWriter::raw(const std::string& line) { out_ << line << '\n'; }

double max_abs_ux(const SolutionSnapshot& s) {
  const std::size_t n = s.size();
  if (n < 2) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    m = std::max(m, std::abs((s.u[b] - s.u[a]) / (s.x[b] - s.x[a])));
  }
  return m;
}

void write_snapshot_csv(const SolutionSnapshot& s, const std::string& path) {
  CsvWriter w(path, {"t", "x", "u", "rho", "r", "k"});
  for (std::size_t i = 0; i < s.size(); ++i) w.row({s.t, s.x[i], s.u[i], s.rho[i], s.r[i], s.k[i]});
}

}  // namespace charflow
