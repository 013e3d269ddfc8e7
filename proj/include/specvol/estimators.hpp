#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specvol/noise.hpp"
#include "specvol/sdesim.hpp"
#include "specvol/spectral.hpp"
#include "specvol/whittle.hpp"

namespace specvol {

/// Integrated-volatility estimators.
///   b  realized volatility of the observed series
///   u  realized volatility of the latent path (simulation only)
///   m1 multiscale estimator with the fitted ratio
///   m2 multiscale estimator with the ratio of the separate periodograms (simulation only)
///   w  Whittle estimator N * sig2_x
///   s1 two-scale estimator with bias correction
///   s2 average of subsampled realized volatilities
enum class Estimator { b, u, m1, m2, w, s1, s2 };

std::string_view to_string(Estimator e) noexcept;
/// Throws ConfigError on an unknown tag.
Estimator parse_estimator(std::string_view tag);
std::vector<Estimator> parse_estimator_list(std::string_view csv);
/// True for estimators that need the latent path.
bool needs_latent(Estimator e) noexcept;

struct EstimateReport {
  Estimator name = Estimator::b;
  double value = 0.0;
  std::optional<WhittleFit> fit;
  std::optional<std::size_t> k_subsample;
  bool degenerate = false;
};

/// Noise model used by the multiscale estimator: white, MA(q), or AICC
/// selection over q = 0..q_max. Textual forms "white", "ma:q", "aicc:qmax".
struct NoiseModelChoice {
  enum class Kind { white, ma, aicc };
  Kind kind = Kind::white;
  std::size_t q = 0;

  static NoiseModelChoice parse(std::string_view text);
  std::string str() const;
};

/// Sum of squared first differences.
double realized_volatility(std::span<const double> levels);

/// Fit the chosen noise model to a periodogram.
WhittleFit fit_noise_model(const Periodogram& per, const NoiseModelChoice& choice,
                           const FitOptions& opts);

/// sum_k L_k s_k with L from `fit`, summed over k = 0..N-1.
EstimateReport multiscale_m1(const Periodogram& per, const WhittleFit& fit);
EstimateReport multiscale_m1(const ObservedSeries& series, const NoiseModelChoice& choice,
                             const FitOptions& opts = {});

/// N * sig2_x.
EstimateReport whittle_w(const WhittleFit& fit, const Grid& g);

/// Oracle ratio from the separately observed latent and noise periodograms.
/// Frequencies where both vanish get ratio 0 and set the degenerate flag.
EstimateReport oracle_m2(const LatentPath& latent, std::span<const double> noise);

/// (1/K) sum over the K offset subgrids of their realized volatilities.
EstimateReport tsrv_avg(std::span<const double> levels, std::size_t k);

/// Average subgrid size (n - K + 1) / K for n increments.
double tsrv_mean_subgrid_size(std::size_t n, std::size_t k);

/// Plug-in ingredients of the optimal subsample count.
struct TsrvPlan {
  double sig2_eps = 0.0;  ///< noise variance plug-in
  double quarticity = 0.0; ///< estimate of int sigma^4 dt
  double k_continuous = 0.0;
  std::size_t k = 1;
};

/// K* = round(c N^{2/3}), c = (12 sig2_eps^2 / (T Q))^{1/3}, with Q from a
/// sparse grid (every `sparse_step`-th level). When `sig2_eps_hat` is empty
/// the noise variance is estimated from the data.
TsrvPlan tsrv_plan(const ObservedSeries& series, std::optional<double> sig2_eps_hat,
                   std::size_t sparse_step = 300);

/// Two-scale estimator tsrv_avg(K*) - (nbar_K*/N) RV. Degenerate (value 0)
/// when K* <= 1.
EstimateReport tsrv_first_best(const ObservedSeries& series,
                               std::optional<double> sig2_eps_hat = std::nullopt);

/// Leading-order variance of the Whittle estimator, 16 T sigma_eps tau_X^{3/2} sqrt(dt).
double predicted_variance_w(double duration, double tau_x, double sigma_eps, double dt);

/// Diagonal Fisher information for (tau_X, sigma_eps^2).
struct FisherMatrix {
  double i_tt = 0.0;
  double i_ee = 0.0;
};

/// i_tt = T / (16 sigma_eps tau_X^{3/2}), i_ee = 2 T / sigma_eps^4.
FisherMatrix fisher_matrix(double duration, double tau_x, double sigma_eps);

} // namespace specvol
