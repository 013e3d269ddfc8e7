#pragma once

#include <functional>
#include <span>
#include <vector>

namespace specvol {

struct NelderMeadOptions {
  /// Stop when max f - min f over the simplex <= rel_tol * max(|f_best|, 1).
  double rel_tol = 1e-10;
  /// Optional additional requirement on the simplex diameter (inf-norm).
  double x_tol = 0.0;
  std::size_t max_evals = 1000;
  /// Edge length of the initial simplex along each coordinate.
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Derivative-free downhill simplex minimization of `f` starting at `x0`.
/// The returned point is never worse than `x0`.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

} // namespace specvol
