#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specvol/noise.hpp"

namespace specvol {

/// A series read from disk. Simulator output carries the latent path too.
struct IngestedSeries {
  ObservedSeries observed;
  std::optional<std::vector<double>> latent; ///< x column of simulator output
  bool simulated = false;
  std::size_t dropped_rows = 0; ///< trailing rows dropped to make N even
};

/// Reads either simulator output (columns t,x,nu,y) or a price file
/// (columns timestamp,price). Timestamps may be integers or ISO-8601 and
/// must be strictly increasing and equally spaced.
IngestedSeries read_series(std::istream& is, bool log_transform);

/// Seconds since the epoch for "YYYY-MM-DD[T ]HH:MM:SS[.fff][Z]".
double parse_iso8601(const std::string& text);

/// Entry point shared by the executable and the tests. Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace specvol
