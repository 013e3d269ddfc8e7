#include "specvol/grid.hpp"

#include <cmath>
#include <string>

#include "specvol/error.hpp"

namespace specvol {

Grid::Grid(std::size_t n, double duration) : n_(n), duration_(duration), dt_(0.0) {
  if (n < 4 || n % 2 != 0) {
    throw InvariantViolation("grid: N must be even and >= 4, got " + std::to_string(n));
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw InvariantViolation("grid: duration T must be positive and finite");
  }
  dt_ = duration / static_cast<double>(n);
}

Grid Grid::trading_day(std::size_t n) { return Grid(n, 1.0 / kDaysPerYear); }

} // namespace specvol
