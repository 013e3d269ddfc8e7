#include "specvol/spectral.hpp"

#include <cmath>
#include <numbers>

#include "specvol/error.hpp"
#include "specvol/fft.hpp"

namespace specvol {

std::vector<double> differences(std::span<const double> levels) {
  if (levels.size() < 2) throw InvariantViolation("increments: need at least 2 levels");
  std::vector<double> d(levels.size() - 1);
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) d[j] = levels[j + 1] - levels[j];
  return d;
}

IncrementSeries increments(const Grid& g, std::span<const double> levels) {
  if (levels.size() != g.n() + 1) {
    throw InvariantViolation("increments: series length must be N + 1");
  }
  return {g, differences(levels)};
}

IncrementSeries increments(const ObservedSeries& series) {
  return increments(series.grid, series.y);
}

IncrementSeries increments(const LatentPath& path) { return increments(path.grid, path.x); }

std::vector<std::complex<double>> dft_increments(std::span<const double> d) {
  auto out = real_dft(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d.size()));
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> dft_increments_direct(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<std::complex<double>> out(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce jk mod n before scaling so the phase stays exact for large n.
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      acc += d[j] * std::polar(1.0, phase);
    }
    out[k] = acc * scale;
  }
  return out;
}

Periodogram periodogram(const IncrementSeries& inc) {
  if (inc.d.size() != inc.grid.n()) {
    throw InvariantViolation("periodogram: increment length must equal N");
  }
  const auto j = dft_increments(inc.d);
  Periodogram per{inc.grid, std::vector<double>(j.size()), std::nullopt};
  for (std::size_t k = 0; k < j.size(); ++k) per.s[k] = std::norm(j[k]);
  double energy = 0.0;
  for (double d : inc.d) energy += d * d;
  per.energy = energy;
  return per;
}

double difference_gain(std::size_t k, std::size_t n) {
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return 4.0 * s * s;
}

double white_noise_spectrum(double sig2_eps, std::size_t k, std::size_t n) {
  return sig2_eps * difference_gain(k, n);
}

double ma_gain(std::span<const double> theta, double f) {
  double re = 1.0;
  double im = 0.0;
  for (std::size_t m = 1; m <= theta.size(); ++m) {
    const double w = 2.0 * std::numbers::pi * f * static_cast<double>(m);
    re += theta[m - 1] * std::cos(w);
    im += theta[m - 1] * std::sin(w);
  }
  return re * re + im * im;
}

double ma_noise_spectrum(double sig2_eta, std::span<const double> theta, std::size_t k,
                         std::size_t n) {
  const double f = static_cast<double>(k) / static_cast<double>(n);
  return sig2_eta * ma_gain(theta, f) * difference_gain(k, n);
}

double noise_spectrum(const NoiseSpec& spec, std::size_t k, std::size_t n) {
  return spec.is_white() ? white_noise_spectrum(spec.sig2, k, n)
                         : ma_noise_spectrum(spec.sig2, spec.theta, k, n);
}

} // namespace specvol
