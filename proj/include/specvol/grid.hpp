#pragma once

#include <cstddef>

namespace specvol {

/// Trading seconds in one day and trading days per year; used to express
/// intraday sampling in annualized time units.
inline constexpr double kSecondsPerDay = 23400.0;
inline constexpr double kDaysPerYear = 252.0;

/// Regular sampling grid t_j = j * dt, j = 0..N, with dt = T / N.
///
/// N counts increments, so a series on the grid has N + 1 levels. N must be
/// even and at least 4 so the half spectrum k = 1..N/2-1 is non-empty.
class Grid {
public:
  Grid(std::size_t n, double duration);

  /// One trading day of `n` equally spaced observations (T = 1/252 year).
  static Grid trading_day(std::size_t n = 23400);

  std::size_t n() const noexcept { return n_; }
  double duration() const noexcept { return duration_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
  /// Frequency of DFT bin k in cycles per unit time, k / T.
  double frequency(std::size_t k) const noexcept { return static_cast<double>(k) / duration_; }

  bool operator==(const Grid&) const = default;

private:
  std::size_t n_;
  double duration_;
  double dt_;
};

} // namespace specvol
