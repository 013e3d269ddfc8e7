#include "specvol/sdesim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specvol/error.hpp"
#include "specvol/rng.hpp"

namespace specvol {
namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidParameter(std::string("non-finite parameter: ") + name);
  }
}

void require_variance(double sig2) {
  require_finite(sig2, "sig2");
  if (sig2 < 0.0) throw InvalidParameter("sig2 must be >= 0");
}

} // namespace

void HestonParams::validate() const {
  require_finite(mu, "mu");
  require_finite(kappa, "kappa");
  require_finite(alpha, "alpha");
  require_finite(gamma, "gamma");
  require_finite(rho, "rho");
  require_finite(x0, "x0");
  require_finite(nu0, "nu0");
  if (kappa <= 0.0) throw InvalidParameter("heston: kappa must be > 0");
  if (alpha <= 0.0) throw InvalidParameter("heston: alpha must be > 0");
  if (gamma < 0.0) throw InvalidParameter("heston: gamma must be >= 0");
  if (std::abs(rho) > 1.0) throw InvalidParameter("heston: |rho| must be <= 1");
  if (nu0 < 0.0) throw InvalidParameter("heston: nu0 must be >= 0");
}

LatentPath simulate_heston(const HestonParams& p, const Grid& g, std::uint64_t seed) {
  p.validate();
  const std::size_t n = g.n();
  const double dt = g.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - p.rho * p.rho);

  LatentPath path{g, std::vector<double>(n + 1), std::vector<double>(n + 1)};
  NormalSource normal(seed);

  double x = p.x0;
  double nu = p.nu0;
  path.x[0] = x;
  path.spot_var[0] = std::max(nu, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double zb = normal();
    const double zw = p.rho * zb + rho_perp * normal();
    const double nu_pos = std::max(nu, 0.0);
    const double vol = std::sqrt(nu_pos);
    x += (p.mu - 0.5 * nu_pos) * dt + vol * sqrt_dt * zb;
    nu += p.kappa * (p.alpha - nu_pos) * dt + p.gamma * vol * sqrt_dt * zw;
    path.x[j + 1] = x;
    path.spot_var[j + 1] = std::max(nu, 0.0);
  }
  return path;
}

LatentPath simulate_ou(double sig2, double theta, const Grid& g, std::uint64_t seed) {
  require_variance(sig2);
  require_finite(theta, "theta");
  const std::size_t n = g.n();
  const double dt = g.dt();
  const double step_sd = std::sqrt(2.0 * sig2 * dt);

  LatentPath path{g, std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 2.0 * sig2)};
  NormalSource normal(seed);
  double x = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    x += theta * x * dt + step_sd * normal();
    path.x[j + 1] = x;
  }
  return path;
}

LatentPath simulate_brownian(double sig2, const Grid& g, std::uint64_t seed) {
  return simulate_ou(sig2, 0.0, g, seed);
}

double true_integrated_volatility(const LatentPath& path) {
  const std::size_t n = path.grid.n();
  if (path.spot_var.size() != n + 1 || path.x.size() != n + 1) {
    throw InvariantViolation("latent path length must be N + 1");
  }
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) sum += path.spot_var[j];
  return path.grid.dt() * sum;
}

} // namespace specvol
