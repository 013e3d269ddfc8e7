#include <doctest.h>

#include <sstream>

#include "specvol/error.hpp"
#include "specvol/mcharness.hpp"
#include "specvol/rng.hpp"

using namespace specvol;

namespace {

ExperimentConfig small_config(std::size_t paths) {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.paths = paths;
  cfg.master_seed = 123;
  cfg.estimators = {Estimator::b, Estimator::s1, Estimator::s2, Estimator::m1,
                    Estimator::w, Estimator::m2, Estimator::u};
  return cfg;
}

std::string summary_csv(const MCReport& r) {
  std::ostringstream os;
  write_summary_csv(os, r);
  return os.str();
}

} // namespace

TEST_CASE("single path report equals the direct computation") {
  ExperimentConfig cfg = small_config(1);
  cfg.estimators = {Estimator::b, Estimator::u};
  const auto rep = run_experiment(cfg, 1);

  const auto latent = simulate_latent(cfg.model, cfg.grid, substream_seed(123, 0, Stream::latent));
  const auto obs = observe(latent, cfg.noise, substream_seed(123, 0, Stream::noise));
  const double iv = true_integrated_volatility(latent);
  CHECK(rep.at(Estimator::b).bias == realized_volatility(obs.y) - iv);
  CHECK(rep.at(Estimator::u).bias == realized_volatility(latent.x) - iv);
  CHECK(rep.at(Estimator::b).variance == 0.0);
  CHECK(rep.at(Estimator::b).n == 1);
}

TEST_CASE("summary statistics follow their definitions") {
  const auto rep = run_experiment(small_config(8), 1);
  const auto& m1 = rep.at(Estimator::m1);
  double mean_est = 0.0, mean_err = 0.0, mse = 0.0;
  for (const auto& p : rep.paths) {
    mean_est += p.values[3] / 8.0;
    mean_err += (p.values[3] - p.true_iv) / 8.0;
    mse += (p.values[3] - p.true_iv) * (p.values[3] - p.true_iv) / 8.0;
  }
  double var = 0.0;
  for (const auto& p : rep.paths) var += (p.values[3] - mean_est) * (p.values[3] - mean_est) / 8.0;
  CHECK(m1.mean_estimate == doctest::Approx(mean_est).epsilon(1e-12));
  CHECK(m1.bias == doctest::Approx(mean_err).epsilon(1e-10));
  CHECK(m1.variance == doctest::Approx(var).epsilon(1e-10));
  CHECK(m1.rmse == doctest::Approx(std::sqrt(mean_err * mean_err + var)).epsilon(1e-10));
  CHECK(m1.error_rmse == doctest::Approx(std::sqrt(mse)).epsilon(1e-10));
}

TEST_CASE("reports are reproducible across runs and thread counts") {
  const auto cfg = small_config(12);
  const auto a = summary_csv(run_experiment(cfg, 1));
  const auto b = summary_csv(run_experiment(cfg, 1));
  const auto c = summary_csv(run_experiment(cfg, 3));
  CHECK(a == b);
  CHECK(a == c);
  auto other = cfg;
  other.master_seed = 124;
  CHECK(summary_csv(run_experiment(other, 1)) != a);
}

TEST_CASE("per-path invariants") {
  const auto rep = run_experiment(small_config(10), 2);
  for (const auto& p : rep.paths) {
    REQUIRE_FALSE(p.failed);
    CHECK(p.values[3] <= p.values[0]); // m1 <= b
    CHECK(p.values[3] == doctest::Approx(p.values[4]).epsilon(0.01));
  }
  CHECK(rep.excluded == 0);
}

TEST_CASE("widespread fit failure aborts the experiment") {
  auto cfg = small_config(4);
  cfg.fit.max_evals_per_dim = 1;
  cfg.fit.polish = false;
  CHECK_THROWS(run_experiment(cfg, 1));
}

TEST_CASE("config validation") {
  auto cfg = small_config(0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.paths = 1;
  cfg.tsrv_k = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tsrv_k = 33;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3u) == 3);
  CHECK(resolve_threads(std::nullopt) >= 1);
}

TEST_CASE("order selection on white noise matches the nested chi-square rate") {
  ExperimentConfig cfg;
  cfg.paths = 200;
  cfg.master_seed = 9;
  cfg.grid = Grid::trading_day(2340);
  const auto rep = run_order_selection(cfg, 3, 1);
  REQUIRE(rep.counts.size() == 4);
  CHECK(rep.failed == 0);
  // Independent chi-square(1) increments per extra order against the AICC
  // penalty give P(q* = 0) = 0.759 for q_max = 3 (numpy simulation).
  CHECK(rep.counts[0] >= 130);
  CHECK(rep.counts[0] <= 172);
  CHECK(rep.counts[0] > rep.counts[1] + rep.counts[2] + rep.counts[3]);
}

TEST_CASE("order selection with q_max = 0") {
  ExperimentConfig cfg;
  cfg.paths = 3;
  cfg.grid = Grid::trading_day(2340);
  const auto rep = run_order_selection(cfg, 0, 1);
  CHECK(rep.counts == std::vector<std::size_t>{3});
}

TEST_CASE("summary and path CSV layout") {
  const auto rep = run_experiment(small_config(2), 1);
  std::istringstream is(summary_csv(rep));
  std::string line;
  std::getline(is, line);
  CHECK(line == "estimator,n,bias,variance,rmse,error_rmse,mean_estimate,mean_true_iv,degenerate");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 7);

  std::ostringstream paths;
  write_paths_csv(paths, rep);
  std::istringstream ps(paths.str());
  int lines = 0;
  while (std::getline(ps, line)) ++lines;
  CHECK(lines == 3);
}
