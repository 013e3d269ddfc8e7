#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specvol/estimators.hpp"
#include "specvol/grid.hpp"
#include "specvol/noise.hpp"
#include "specvol/sdesim.hpp"
#include "specvol/whittle.hpp"

namespace specvol {

struct BrownianModel {
  double sig2 = 0.01;
};

struct OuModel {
  double sig2 = 0.01;
  double theta = -1.0;
};

using LatentModel = std::variant<HestonParams, BrownianModel, OuModel>;

/// Noise-variance plug-in for the two-scale optimal subsample count.
enum class TsrvNoisePlugin {
  realized, ///< RV / (2N)
  whittle,  ///< fitted white-noise variance of the multiscale fit
};

struct ExperimentConfig {
  std::string name = "experiment";
  LatentModel model = HestonParams{};
  Grid grid = Grid::trading_day();
  NoiseSpec noise = NoiseSpec::white(0.0005 * 0.0005);
  std::vector<Estimator> estimators{Estimator::b,  Estimator::s1, Estimator::m1,
                                    Estimator::w,  Estimator::m2, Estimator::u};
  std::size_t paths = 2000;
  std::uint64_t master_seed = 1;
  FitOptions fit;
  NoiseModelChoice noise_model;
  /// Subsample count of s2; the s1 rule's K* when unset.
  std::optional<std::size_t> tsrv_k;
  TsrvNoisePlugin tsrv_noise = TsrvNoisePlugin::whittle;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

LatentPath simulate_latent(const LatentModel& model, const Grid& g, std::uint64_t seed);

/// Outcome of one Monte Carlo path.
struct PathRecord {
  std::size_t path_id = 0;
  double true_iv = 0.0;
  std::vector<double> values; ///< aligned with ExperimentConfig::estimators
  double sig2_x = 0.0;        ///< fitted signal variance (0 when no fit ran)
  double sig2_noise = 0.0;    ///< fitted noise variance
  std::size_t q = 0;
  std::size_t tsrv_k = 0;
  bool fit_boundary = false;
  bool s1_degenerate = false;
  bool m2_degenerate = false;
  bool failed = false;
  std::string error;
};

/// Sample statistics of one estimator over the included paths.
///
/// bias = mean(est - IV); variance = population variance of the estimates;
/// rmse = sqrt(bias^2 + variance). error_rmse = sqrt(mean((est - IV)^2)) is
/// reported alongside.
struct EstimatorStats {
  Estimator name = Estimator::b;
  std::size_t n = 0;
  double mean_estimate = 0.0;
  double mean_true_iv = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double rmse = 0.0;
  double error_rmse = 0.0;
  std::size_t degenerate = 0;
};

struct MCReport {
  ExperimentConfig config;
  std::vector<EstimatorStats> stats;
  std::vector<PathRecord> paths;
  std::size_t excluded = 0;
  double mean_sig2_x = 0.0;
  double mean_sig2_noise = 0.0;
  double wall_seconds = 0.0;

  const EstimatorStats& at(Estimator e) const;
};

/// Simulate and estimate path `index` of the experiment.
PathRecord run_path(const ExperimentConfig& cfg, std::size_t index);

/// Worker count from an explicit request, then SPECVOL_THREADS, then the
/// hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> requested);

/// Runs every path (in parallel when threads > 1) and folds the results in
/// path order, so the report does not depend on scheduling. Throws when more
/// than 5% of paths fail.
MCReport run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// Fold per-path records into statistics (paths must be in index order).
MCReport summarize(const ExperimentConfig& cfg, std::vector<PathRecord> paths);

struct OrderSelectionReport {
  std::size_t q_max = 0;
  std::vector<OrderSelection> selections; ///< one per successful path, in path order
  std::vector<std::size_t> counts;        ///< how often each q was selected
  std::size_t failed = 0;
};

/// AICC order selection on each simulated path of `cfg` (observed series only).
OrderSelectionReport run_order_selection(const ExperimentConfig& cfg, std::size_t q_max,
                                         unsigned threads = 1);

void write_paths_csv(std::ostream& os, const MCReport& report);
void write_summary_csv(std::ostream& os, const MCReport& report);
/// One row per MA order: q, theta_1..theta_qmax, sig2_x, sig2_noise, loglik, aicc, selected.
void write_order_table_csv(std::ostream& os, const OrderSelection& sel, std::size_t q_max);

} // namespace specvol
