#include "specvol/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "specvol/csv.hpp"
#include "specvol/error.hpp"
#include "specvol/rng.hpp"
#include "specvol/spectral.hpp"

namespace specvol {

void ExperimentConfig::validate() const {
  if (paths < 1) throw ConfigError("paths: must be >= 1");
  if (estimators.empty()) throw ConfigError("estimators: list is empty");
  try {
    noise.validate();
    std::visit(
        [](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, HestonParams>) {
            m.validate();
          } else {
            if (!std::isfinite(m.sig2) || m.sig2 < 0.0) {
              throw InvalidParameter("model.sig2 must be >= 0");
            }
          }
        },
        model);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (tsrv_k && (*tsrv_k < 1 || *tsrv_k > grid.n() / 2)) {
    throw ConfigError("tsrv_k: must lie in [1, N/2]");
  }
  if (fit.multistarts < 1) throw ConfigError("fit.multistarts: must be >= 1");
}

LatentPath simulate_latent(const LatentModel& model, const Grid& g, std::uint64_t seed) {
  return std::visit(
      [&](const auto& m) -> LatentPath {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HestonParams>) {
          return simulate_heston(m, g, seed);
        } else if constexpr (std::is_same_v<M, BrownianModel>) {
          return simulate_brownian(m.sig2, g, seed);
        } else {
          return simulate_ou(m.sig2, m.theta, g, seed);
        }
      },
      model);
}

const EstimatorStats& MCReport::at(Estimator e) const {
  for (const auto& s : stats) {
    if (s.name == e) return s;
  }
  throw InvariantViolation("report has no statistics for estimator " + std::string(to_string(e)));
}

namespace {

bool wants(const ExperimentConfig& cfg, Estimator e) {
  return std::find(cfg.estimators.begin(), cfg.estimators.end(), e) != cfg.estimators.end();
}

double white_equivalent(const WhittleFit& fit) { return fit.noise.marginal_variance(); }

} // namespace

PathRecord run_path(const ExperimentConfig& cfg, std::size_t index) {
  PathRecord rec;
  rec.path_id = index;
  rec.values.assign(cfg.estimators.size(), std::numeric_limits<double>::quiet_NaN());

  const auto latent =
      simulate_latent(cfg.model, cfg.grid, substream_seed(cfg.master_seed, index, Stream::latent));
  const auto eps = sample_noise(cfg.noise, cfg.grid.n() + 1,
                                substream_seed(cfg.master_seed, index, Stream::noise));
  const auto obs = observe(latent, eps);
  rec.true_iv = true_integrated_volatility(latent);

  const bool need_fit = wants(cfg, Estimator::m1) || wants(cfg, Estimator::w) ||
                        (wants(cfg, Estimator::s1) && cfg.tsrv_noise == TsrvNoisePlugin::whittle);
  std::optional<Periodogram> per;
  std::optional<WhittleFit> fit;
  if (need_fit) {
    per = periodogram(increments(obs));
    try {
      fit = fit_noise_model(*per, cfg.noise_model, cfg.fit);
    } catch (const FitFailed& e) {
      rec.failed = true;
      rec.error = e.what();
      return rec;
    }
    rec.sig2_x = fit->sig2_x;
    rec.sig2_noise = fit->noise.sig2;
    rec.q = fit->q;
    rec.fit_boundary = fit->boundary;
  }

  std::optional<double> noise_hat;
  if (cfg.tsrv_noise == TsrvNoisePlugin::whittle && fit) noise_hat = white_equivalent(*fit);
  std::optional<TsrvPlan> plan;
  auto tsrv = [&]() -> const TsrvPlan& {
    if (!plan) plan = tsrv_plan(obs, noise_hat);
    return *plan;
  };

  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
    double v = 0.0;
    switch (cfg.estimators[i]) {
    case Estimator::b: v = realized_volatility(obs.y); break;
    case Estimator::u: v = realized_volatility(latent.x); break;
    case Estimator::m1: v = multiscale_m1(*per, *fit).value; break;
    case Estimator::w: v = whittle_w(*fit, cfg.grid).value; break;
    case Estimator::m2: {
      const auto r = oracle_m2(latent, eps);
      rec.m2_degenerate = r.degenerate;
      v = r.value;
      break;
    }
    case Estimator::s1: {
      const auto& p = tsrv();
      const auto r = tsrv_first_best(obs, noise_hat);
      rec.s1_degenerate = r.degenerate;
      rec.tsrv_k = p.k;
      v = r.value;
      break;
    }
    case Estimator::s2: {
      const std::size_t k = cfg.tsrv_k ? *cfg.tsrv_k : tsrv().k;
      v = tsrv_avg(obs.y, k).value;
      if (rec.tsrv_k == 0) rec.tsrv_k = k;
      break;
    }
    }
    rec.values[i] = v;
  }
  return rec;
}

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("SPECVOL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <class Result>
std::vector<Result> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<Result(std::size_t)>& job) {
  std::vector<Result> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

} // namespace

MCReport summarize(const ExperimentConfig& cfg, std::vector<PathRecord> paths) {
  MCReport rep;
  rep.config = cfg;
  rep.paths = std::move(paths);

  std::size_t included = 0;
  double sum_x = 0.0, sum_noise = 0.0;
  for (const auto& p : rep.paths) {
    if (p.failed) {
      ++rep.excluded;
      continue;
    }
    ++included;
    sum_x += p.sig2_x;
    sum_noise += p.sig2_noise;
  }
  if (included > 0) {
    rep.mean_sig2_x = sum_x / static_cast<double>(included);
    rep.mean_sig2_noise = sum_noise / static_cast<double>(included);
  }

  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
    EstimatorStats s;
    s.name = cfg.estimators[i];
    double sum_est = 0.0, sum_iv = 0.0, sum_err2 = 0.0;
    for (const auto& p : rep.paths) {
      if (p.failed) continue;
      ++s.n;
      sum_est += p.values[i];
      sum_iv += p.true_iv;
      const double err = p.values[i] - p.true_iv;
      sum_err2 += err * err;
      if (s.name == Estimator::s1 && p.s1_degenerate) ++s.degenerate;
      if (s.name == Estimator::m2 && p.m2_degenerate) ++s.degenerate;
    }
    if (s.n > 0) {
      const double n = static_cast<double>(s.n);
      s.mean_estimate = sum_est / n;
      s.mean_true_iv = sum_iv / n;
      s.bias = s.mean_estimate - s.mean_true_iv;
      double ss = 0.0;
      for (const auto& p : rep.paths) {
        if (p.failed) continue;
        const double dv = p.values[i] - s.mean_estimate;
        ss += dv * dv;
      }
      s.variance = ss / n;
      s.rmse = std::sqrt(s.bias * s.bias + s.variance);
      s.error_rmse = std::sqrt(sum_err2 / n);
    }
    rep.stats.push_back(s);
  }
  return rep;
}

MCReport run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto paths = parallel_map<PathRecord>(cfg.paths, threads,
                                        [&cfg](std::size_t i) { return run_path(cfg, i); });
  auto rep = summarize(cfg, std::move(paths));
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (static_cast<double>(rep.excluded) > 0.05 * static_cast<double>(cfg.paths)) {
    throw std::runtime_error("experiment '" + cfg.name + "': " + std::to_string(rep.excluded) +
                             " of " + std::to_string(cfg.paths) + " paths failed to fit");
  }
  return rep;
}

OrderSelectionReport run_order_selection(const ExperimentConfig& cfg, std::size_t q_max,
                                         unsigned threads) {
  cfg.validate();
  using Slot = std::optional<OrderSelection>;
  auto results = parallel_map<Slot>(cfg.paths, threads, [&](std::size_t i) -> Slot {
    const auto latent =
        simulate_latent(cfg.model, cfg.grid, substream_seed(cfg.master_seed, i, Stream::latent));
    const auto obs =
        observe(latent, cfg.noise, substream_seed(cfg.master_seed, i, Stream::noise));
    try {
      return select_order_aicc(periodogram(increments(obs)), q_max, cfg.fit);
    } catch (const FitFailed&) {
      return std::nullopt;
    }
  });
  OrderSelectionReport rep;
  rep.q_max = q_max;
  rep.counts.assign(q_max + 1, 0);
  for (auto& r : results) {
    if (!r) {
      ++rep.failed;
      continue;
    }
    ++rep.counts[r->q_star];
    rep.selections.push_back(std::move(*r));
  }
  if (static_cast<double>(rep.failed) > 0.05 * static_cast<double>(cfg.paths)) {
    throw std::runtime_error("order selection: too many paths failed to fit");
  }
  return rep;
}

void write_paths_csv(std::ostream& os, const MCReport& report) {
  std::vector<std::string> header{"path_id", "true_iv"};
  for (auto e : report.config.estimators) header.emplace_back(to_string(e));
  for (const char* h : {"sig2_x", "sig2_noise", "q", "tsrv_k", "fit_boundary", "s1_degenerate",
                        "m2_degenerate", "failed"}) {
    header.emplace_back(h);
  }
  write_csv_row(os, header);
  for (const auto& p : report.paths) {
    std::vector<std::string> row{std::to_string(p.path_id), format_double(p.true_iv)};
    for (double v : p.values) row.push_back(format_double(v));
    row.push_back(format_double(p.sig2_x));
    row.push_back(format_double(p.sig2_noise));
    row.push_back(std::to_string(p.q));
    row.push_back(std::to_string(p.tsrv_k));
    row.emplace_back(p.fit_boundary ? "1" : "0");
    row.emplace_back(p.s1_degenerate ? "1" : "0");
    row.emplace_back(p.m2_degenerate ? "1" : "0");
    row.emplace_back(p.failed ? "1" : "0");
    write_csv_row(os, row);
  }
}

void write_summary_csv(std::ostream& os, const MCReport& report) {
  write_csv_row(os, {"estimator", "n", "bias", "variance", "rmse", "error_rmse", "mean_estimate",
                     "mean_true_iv", "degenerate"});
  for (const auto& s : report.stats) {
    write_csv_row(os, {std::string(to_string(s.name)), std::to_string(s.n), format_double(s.bias),
                       format_double(s.variance), format_double(s.rmse),
                       format_double(s.error_rmse), format_double(s.mean_estimate),
                       format_double(s.mean_true_iv), std::to_string(s.degenerate)});
  }
}

void write_order_table_csv(std::ostream& os, const OrderSelection& sel, std::size_t q_max) {
  std::vector<std::string> header{"q"};
  for (std::size_t m = 1; m <= q_max; ++m) header.push_back("theta" + std::to_string(m));
  for (const char* h : {"sig2_x", "sig2_noise", "loglik", "aicc", "selected", "error"}) {
    header.emplace_back(h);
  }
  write_csv_row(os, header);
  for (const auto& row : sel.table) {
    std::vector<std::string> cells{std::to_string(row.q)};
    for (std::size_t m = 0; m < q_max; ++m) {
      cells.push_back(row.fit && m < row.fit->noise.theta.size()
                          ? format_double(row.fit->noise.theta[m])
                          : std::string{});
    }
    if (row.fit) {
      cells.push_back(format_double(row.fit->sig2_x));
      cells.push_back(format_double(row.fit->noise.sig2));
      cells.push_back(format_double(row.fit->loglik));
      cells.push_back(format_double(row.fit->aicc));
    } else {
      cells.insert(cells.end(), 4, std::string{});
    }
    cells.emplace_back(row.q == sel.q_star && row.fit ? "1" : "0");
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    cells.push_back(err);
    write_csv_row(os, cells);
  }
}

} // namespace specvol
