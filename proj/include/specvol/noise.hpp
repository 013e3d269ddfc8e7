#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specvol/grid.hpp"
#include "specvol/sdesim.hpp"

namespace specvol {

/// Microstructure noise model eps_j = eta_j + sum_{m=1..q} theta_m eta_{j-m}
/// with eta iid N(0, sig2). White noise is the q = 0 case, where sig2 is the
/// noise variance itself.
struct NoiseSpec {
  double sig2 = 0.0;
  std::vector<double> theta;

  static NoiseSpec white(double sig2_eps) { return {sig2_eps, {}}; }
  static NoiseSpec ma(std::vector<double> theta, double sig2_eta) {
    return {sig2_eta, std::move(theta)};
  }

  std::size_t order() const noexcept { return theta.size(); }
  bool is_white() const noexcept { return theta.empty(); }
  /// Var(eps) = sig2 * (1 + sum theta_m^2).
  double marginal_variance() const noexcept;
  void validate() const;
};

/// n stationary noise draws. Main innovations are drawn first so that an MA
/// spec with all-zero theta reproduces the white sequence for the same seed;
/// the q pre-sample innovations follow.
std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed);

/// Observed log-prices Y_{t_j} = X_{t_j} + eps_{t_j}, j = 0..N.
struct ObservedSeries {
  Grid grid;
  std::vector<double> y;
};

ObservedSeries observe(const LatentPath& path, std::span<const double> noise);
ObservedSeries observe(const LatentPath& path, const NoiseSpec& spec, std::uint64_t seed);

} // namespace specvol
