#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace invscat::io {

/// Rows "l delta" with '#' comments. Each delta carries half a unit of its
/// last printed decimal as uncertainty.
struct ShiftTable {
  std::vector<double> deltas;
  std::vector<double> sigma;
};

ShiftTable parse_shift_table(std::istream& in);
ShiftTable read_shift_file(const std::string& path);

/// Two whitespace-separated columns "r q", increasing r, '#' comments.
struct PotentialTable {
  std::vector<double> r;
  std::vector<double> q;
};

PotentialTable parse_potential_table(std::istream& in);
PotentialTable read_potential_table(const std::string& path);

struct CsvRow {
  double r;
  std::optional<double> q_true;
  double q_rec;
};

struct CsvDocument {
  /// "key=value" items for the "# config:" header.
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> warnings;
  std::vector<CsvRow> rows;
};

/// 9 significant digits; blank q_true when unknown.
void write_csv(std::ostream& out, const CsvDocument& doc);
CsvDocument parse_csv(std::istream& in);
CsvDocument read_csv(const std::string& path);

/// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

/// %.9g formatting, used by every writer.
std::string format_g9(double v);

}  // namespace invscat::io
