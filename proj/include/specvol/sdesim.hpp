#pragma once

#include <cstdint>
#include <vector>

#include "specvol/grid.hpp"

namespace specvol {

/// Heston stochastic-volatility model, all rates annualized.
///
///   dX = (mu - nu/2) dt + sqrt(nu) dB
///   dnu = kappa (alpha - nu) dt + gamma sqrt(nu) dW,  corr(dB, dW) = rho
struct HestonParams {
  double mu = 0.05;
  double kappa = 5.0;
  double alpha = 0.04;
  double gamma = 0.5;
  double rho = -0.5;
  double x0 = 0.0;
  double nu0 = 0.04;

  /// Throws InvalidParameter on non-finite or out-of-range values.
  void validate() const;
  /// 2 kappa alpha >= gamma^2; reported, never enforced.
  bool feller() const noexcept { return 2.0 * kappa * alpha >= gamma * gamma; }
};

/// Unobserved log-price path and its spot variance on a regular grid.
struct LatentPath {
  Grid grid;
  std::vector<double> x;        ///< N + 1 levels X_{t_j}
  std::vector<double> spot_var; ///< N + 1 values sigma^2_{t_j}, per year
};

/// Euler-Maruyama with full truncation of the variance process. spot_var
/// records max(nu, 0) at each grid point.
LatentPath simulate_heston(const HestonParams& p, const Grid& g, std::uint64_t seed);

/// dX = sqrt(2 sig2) dB started at 0; spot_var is the constant 2 sig2.
LatentPath simulate_brownian(double sig2, const Grid& g, std::uint64_t seed);

/// dX = theta X dt + sqrt(2 sig2) dB started at 0. theta < 0 mean-reverts;
/// theta = 0 reproduces simulate_brownian draw for draw.
LatentPath simulate_ou(double sig2, double theta, const Grid& g, std::uint64_t seed);

/// Riemann sum (T/N) * sum_{j=1..N} spot_var[j].
double true_integrated_volatility(const LatentPath& path);

} // namespace specvol
