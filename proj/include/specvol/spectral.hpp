#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "specvol/grid.hpp"
#include "specvol/noise.hpp"
#include "specvol/sdesim.hpp"

namespace specvol {

/// First differences dU_j = U_{j+1} - U_j of a series on a grid.
struct IncrementSeries {
  Grid grid;
  std::vector<double> d;
};

/// Periodogram s_k = |J_k|^2 of an increment series, k = 0..N-1.
struct Periodogram {
  Grid grid;
  std::vector<double> s;
  /// Time-domain sum of squared increments; equals sum(s) up to round-off.
  std::optional<double> energy;

  /// Frequencies entering the likelihood: k = 1..N/2-1.
  std::size_t first_used() const noexcept { return 1; }
  std::size_t end_used() const noexcept { return grid.n() / 2; }
  std::size_t used_count() const noexcept { return grid.n() / 2 - 1; }
};

std::vector<double> differences(std::span<const double> levels);

IncrementSeries increments(const ObservedSeries& series);
IncrementSeries increments(const LatentPath& path);
IncrementSeries increments(const Grid& g, std::span<const double> levels);

/// J_k = N^{-1/2} sum_j dU_j e^{-2 pi i j k / N}, k = 0..N-1.
std::vector<std::complex<double>> dft_increments(std::span<const double> d);

/// Direct O(N^2) evaluation of dft_increments.
std::vector<std::complex<double>> dft_increments_direct(std::span<const double> d);

Periodogram periodogram(const IncrementSeries& inc);

/// 4 sin^2(pi k / N): gain of first differencing at DFT bin k.
double difference_gain(std::size_t k, std::size_t n);

/// sig2_eps |2 sin(pi k/N)|^2, the spectrum of differenced white noise.
double white_noise_spectrum(double sig2_eps, std::size_t k, std::size_t n);

/// |1 + sum_m theta_m e^{2 pi i f m}|^2 at frequency f in cycles per sample.
double ma_gain(std::span<const double> theta, double f);

/// sig2_eta |1 + sum_m theta_m e^{2 pi i (k/N) m}|^2 |2 sin(pi k/N)|^2.
double ma_noise_spectrum(double sig2_eta, std::span<const double> theta, std::size_t k,
                         std::size_t n);

/// Noise spectrum of `spec` at bin k (white or MA form).
double noise_spectrum(const NoiseSpec& spec, std::size_t k, std::size_t n);

} // namespace specvol
