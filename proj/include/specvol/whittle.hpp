#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specvol/grid.hpp"
#include "specvol/noise.hpp"
#include "specvol/spectral.hpp"

namespace specvol {

/// Optimizer settings for the multiscale Whittle fit.
struct FitOptions {
  /// Relative tolerance on the log-likelihood spread of the simplex.
  double rel_tol = 1e-10;
  /// Simplex evaluation budget per start is this times the parameter count.
  std::size_t max_evals_per_dim = 500;
  std::size_t multistarts = 3;
  /// Largest MA order tried by AICC order selection.
  std::size_t q_max = 8;
  /// Refine the simplex optimum with damped Fisher scoring.
  bool polish = true;
};

/// Fitted signal level and noise model.
///
/// sig2_x is the per-increment signal variance (the flat level of the
/// differenced latent spectrum). noise.sig2 is sig2_eps for q = 0 and the
/// innovation variance sig2_eta for q >= 1.
struct WhittleFit {
  double sig2_x = 0.0;
  NoiseSpec noise;
  std::size_t q = 0;
  double loglik = 0.0;
  double loglik_init = 0.0; ///< log-likelihood at the first starting point
  double aicc = 0.0;
  std::size_t n_freq = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool boundary = false;

  double sig2_noise() const noexcept { return noise.sig2; }
};

/// The optimizer did not meet its tolerance; carries the best iterate.
class FitFailed : public std::runtime_error {
public:
  FitFailed(const std::string& what, WhittleFit best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const WhittleFit& best() const noexcept { return best_; }

private:
  WhittleFit best_;
};

/// Multiscale energy log-likelihood
///   -sum_{k=1}^{N/2-1} [ log S_k + s_k / S_k ],  S_k = sig2_x + noise spectrum(k).
/// Throws DomainError if S_k <= 0 at a used frequency.
double whittle_loglik(const Periodogram& per, double sig2_x, const NoiseSpec& noise);

/// -2 loglik + 2 (q + 2) n / (n - q - 3).
double aicc(double loglik, std::size_t q, std::size_t n_freq);

/// Reflects roots of 1 + sum theta_m z^m that lie inside the unit circle and
/// rescales sig2 so the noise spectrum is unchanged. The result has all roots
/// on or outside the unit circle.
NoiseSpec invertible_form(const NoiseSpec& noise);

/// Maximizes the likelihood over (sig2_x, sig2_eps) with the white noise model.
WhittleFit fit_white(const Periodogram& per, const FitOptions& opts = {});

/// Maximizes the likelihood over (sig2_x, sig2_eta, theta_1..theta_q).
/// Starts from `warm` when given, otherwise from a white fit with theta = 0.
WhittleFit fit_ma(const Periodogram& per, std::size_t q, const FitOptions& opts = {},
                  const WhittleFit* warm = nullptr);

struct OrderRow {
  std::size_t q = 0;
  std::optional<WhittleFit> fit; ///< empty when the fit failed
  std::string error;
};

struct OrderSelection {
  std::size_t q_star = 0;
  WhittleFit fit;
  std::vector<OrderRow> table;
};

/// Fits q = 0..q_max and keeps the AICC minimizer (ties go to the smaller q).
/// Failed orders are reported in the table and skipped.
OrderSelection select_order_aicc(const Periodogram& per, std::size_t q_max,
                                 const FitOptions& opts = {});

/// Frequency-wise shrinkage factors L_k, k = 0..N-1.
struct RatioCurve {
  std::vector<double> l;
};

/// L_k = sig2_x / (sig2_x + noise spectrum(k)); L_0 = 1.
RatioCurve multiscale_ratio(double sig2_x, const NoiseSpec& noise, std::size_t n);
RatioCurve multiscale_ratio(const WhittleFit& fit, const Grid& g);

} // namespace specvol
