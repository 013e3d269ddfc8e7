#include "specvol/noise.hpp"

#include <cmath>

#include "specvol/error.hpp"
#include "specvol/rng.hpp"

namespace specvol {

double NoiseSpec::marginal_variance() const noexcept {
  double gain = 1.0;
  for (double t : theta) gain += t * t;
  return sig2 * gain;
}

void NoiseSpec::validate() const {
  if (!std::isfinite(sig2) || sig2 < 0.0) {
    throw InvalidParameter("noise: variance must be finite and >= 0");
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw InvalidParameter("noise: MA coefficients must be finite");
  }
}

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  const std::size_t q = spec.order();
  const double sd = std::sqrt(spec.sig2);
  NormalSource normal(seed);

  // eta[q + j] is the innovation at time j; eta[0..q) hold times -q..-1.
  std::vector<double> eta(n + q);
  for (std::size_t j = 0; j < n; ++j) eta[q + j] = sd * normal();
  for (std::size_t m = 0; m < q; ++m) eta[q - 1 - m] = sd * normal();

  std::vector<double> eps(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = eta[q + j];
    for (std::size_t m = 1; m <= q; ++m) v += spec.theta[m - 1] * eta[q + j - m];
    eps[j] = v;
  }
  return eps;
}

ObservedSeries observe(const LatentPath& path, std::span<const double> noise) {
  if (noise.size() != path.x.size()) {
    throw InvariantViolation("observe: noise length must equal path length");
  }
  ObservedSeries obs{path.grid, std::vector<double>(path.x.size())};
  for (std::size_t j = 0; j < noise.size(); ++j) obs.y[j] = path.x[j] + noise[j];
  return obs;
}

ObservedSeries observe(const LatentPath& path, const NoiseSpec& spec, std::uint64_t seed) {
  const auto eps = sample_noise(spec, path.x.size(), seed);
  return observe(path, eps);
}

} // namespace specvol
