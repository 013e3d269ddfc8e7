#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace specvol {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Parses a full token as a double; throws ConfigError naming `what` on failure.
double parse_double(std::string_view token, std::string_view what);

/// Header plus rows of raw string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; ///< 1-based source line of each row

  /// Column index by name, or npos.
  std::size_t column(std::string_view name) const;
};

/// Reads comma-separated text. Blank lines and lines starting with '#' are
/// skipped. Throws ConfigError citing the line on a ragged row.
CsvTable read_csv(std::istream& is);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

} // namespace specvol
