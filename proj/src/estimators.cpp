#include "specvol/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "specvol/error.hpp"

namespace specvol {

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
  case Estimator::b: return "b";
  case Estimator::u: return "u";
  case Estimator::m1: return "m1";
  case Estimator::m2: return "m2";
  case Estimator::w: return "w";
  case Estimator::s1: return "s1";
  case Estimator::s2: return "s2";
  }
  return "?";
}

Estimator parse_estimator(std::string_view tag) {
  for (auto e : {Estimator::b, Estimator::u, Estimator::m1, Estimator::m2, Estimator::w,
                 Estimator::s1, Estimator::s2}) {
    if (to_string(e) == tag) return e;
  }
  throw ConfigError("unknown estimator '" + std::string(tag) + "' (expected b,u,m1,m2,w,s1,s2)");
}

std::vector<Estimator> parse_estimator_list(std::string_view csv) {
  std::vector<Estimator> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string_view::npos ? csv.size() : comma;
    const auto tok = csv.substr(start, end - start);
    if (!tok.empty()) out.push_back(parse_estimator(tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty estimator list");
  return out;
}

bool needs_latent(Estimator e) noexcept { return e == Estimator::u || e == Estimator::m2; }

NoiseModelChoice NoiseModelChoice::parse(std::string_view text) {
  if (text == "white") return {Kind::white, 0};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    std::size_t q = 0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), q);
    if (ec == std::errc{} && ptr == tail.data() + tail.size()) {
      if (head == "ma") {
        if (q == 0) return {Kind::white, 0};
        return {Kind::ma, q};
      }
      if (head == "aicc") return {Kind::aicc, q};
    }
  }
  throw ConfigError("bad noise model '" + std::string(text) + "' (expected white, ma:q or aicc:qmax)");
}

std::string NoiseModelChoice::str() const {
  switch (kind) {
  case Kind::white: return "white";
  case Kind::ma: return "ma:" + std::to_string(q);
  case Kind::aicc: return "aicc:" + std::to_string(q);
  }
  return "white";
}

double realized_volatility(std::span<const double> levels) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
    const double d = levels[j + 1] - levels[j];
    acc += d * d;
  }
  return acc;
}

WhittleFit fit_noise_model(const Periodogram& per, const NoiseModelChoice& choice,
                           const FitOptions& opts) {
  switch (choice.kind) {
  case NoiseModelChoice::Kind::white: return fit_white(per, opts);
  case NoiseModelChoice::Kind::ma: return fit_ma(per, choice.q, opts);
  case NoiseModelChoice::Kind::aicc: return select_order_aicc(per, choice.q, opts).fit;
  }
  return fit_white(per, opts);
}

EstimateReport multiscale_m1(const Periodogram& per, const WhittleFit& fit) {
  const auto rc = multiscale_ratio(fit, per.grid);
  // Subtracting the removed energy from the time-domain total keeps m1 <= RV
  // exactly, not just up to FFT round-off.
  double removed = 0.0, total = 0.0;
  for (std::size_t k = 0; k < per.s.size(); ++k) {
    removed += (1.0 - rc.l[k]) * per.s[k];
    total += per.s[k];
  }
  EstimateReport r;
  r.name = Estimator::m1;
  r.value = std::max(per.energy.value_or(total) - removed, 0.0);
  r.fit = fit;
  return r;
}

EstimateReport multiscale_m1(const ObservedSeries& series, const NoiseModelChoice& choice,
                             const FitOptions& opts) {
  const auto per = periodogram(increments(series));
  return multiscale_m1(per, fit_noise_model(per, choice, opts));
}

EstimateReport whittle_w(const WhittleFit& fit, const Grid& g) {
  EstimateReport r;
  r.name = Estimator::w;
  r.value = static_cast<double>(g.n()) * fit.sig2_x;
  r.fit = fit;
  return r;
}

EstimateReport oracle_m2(const LatentPath& latent, std::span<const double> noise) {
  if (noise.size() != latent.x.size()) {
    throw InvariantViolation("oracle_m2: noise length must equal path length");
  }
  const auto obs = observe(latent, noise);
  const auto sx = periodogram(increments(latent));
  const auto se = periodogram(increments(latent.grid, noise));
  const auto sy = periodogram(increments(obs));
  EstimateReport r;
  r.name = Estimator::m2;
  double acc = 0.0;
  for (std::size_t k = 0; k < sy.s.size(); ++k) {
    const double denom = sx.s[k] + se.s[k];
    if (denom > 0.0) {
      acc += sx.s[k] / denom * sy.s[k];
    } else {
      r.degenerate = true;
    }
  }
  r.value = acc;
  return r;
}

EstimateReport tsrv_avg(std::span<const double> levels, std::size_t k) {
  if (levels.size() < 3) throw InvalidParameter("tsrv: series too short");
  const std::size_t n = levels.size() - 1;
  if (k < 1 || k > n / 2) {
    throw InvalidParameter("tsrv: subsample count K must lie in [1, N/2]");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j + k <= n; ++j) {
    const double d = levels[j + k] - levels[j];
    acc += d * d;
  }
  EstimateReport r;
  r.name = Estimator::s2;
  r.value = acc / static_cast<double>(k);
  r.k_subsample = k;
  return r;
}

double tsrv_mean_subgrid_size(std::size_t n, std::size_t k) {
  return static_cast<double>(n - k + 1) / static_cast<double>(k);
}

TsrvPlan tsrv_plan(const ObservedSeries& series, std::optional<double> sig2_eps_hat,
                   std::size_t sparse_step) {
  const std::size_t n = series.grid.n();
  const double duration = series.grid.duration();
  TsrvPlan plan;
  plan.sig2_eps = sig2_eps_hat ? *sig2_eps_hat
                               : realized_volatility(series.y) / (2.0 * static_cast<double>(n));

  sparse_step = std::clamp<std::size_t>(sparse_step, 1, n);
  double fourth = 0.0;
  std::size_t n_sparse = 0;
  for (std::size_t j = 0; j + sparse_step <= n; j += sparse_step) {
    const double d = series.y[j + sparse_step] - series.y[j];
    fourth += d * d * d * d;
    ++n_sparse;
  }
  plan.quarticity = static_cast<double>(n_sparse) / (3.0 * duration) * fourth;

  if (plan.quarticity > 0.0) {
    const double c =
        std::cbrt(12.0 * plan.sig2_eps * plan.sig2_eps / (duration * plan.quarticity));
    plan.k_continuous = c * std::pow(static_cast<double>(n), 2.0 / 3.0);
  } else {
    plan.k_continuous = static_cast<double>(n / 2);
  }
  const double rounded = std::round(plan.k_continuous);
  plan.k = static_cast<std::size_t>(std::clamp(rounded, 1.0, static_cast<double>(n / 2)));
  return plan;
}

EstimateReport tsrv_first_best(const ObservedSeries& series, std::optional<double> sig2_eps_hat) {
  const auto plan = tsrv_plan(series, sig2_eps_hat);
  EstimateReport r;
  r.name = Estimator::s1;
  r.k_subsample = plan.k;
  if (plan.k <= 1) {
    r.degenerate = true;
    r.value = 0.0;
    return r;
  }
  const std::size_t n = series.grid.n();
  const double avg = tsrv_avg(series.y, plan.k).value;
  const double nbar = tsrv_mean_subgrid_size(n, plan.k);
  r.value = avg - nbar / static_cast<double>(n) * realized_volatility(series.y);
  return r;
}

namespace {
void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}
} // namespace

double predicted_variance_w(double duration, double tau_x, double sigma_eps, double dt) {
  require_positive(duration, "T");
  require_positive(tau_x, "tau_x");
  require_positive(sigma_eps, "sigma_eps");
  require_positive(dt, "dt");
  return 16.0 * duration * sigma_eps * tau_x * std::sqrt(tau_x) * std::sqrt(dt);
}

FisherMatrix fisher_matrix(double duration, double tau_x, double sigma_eps) {
  require_positive(duration, "T");
  require_positive(tau_x, "tau_x");
  require_positive(sigma_eps, "sigma_eps");
  const double s2 = sigma_eps * sigma_eps;
  return {duration / (16.0 * sigma_eps * tau_x * std::sqrt(tau_x)), 2.0 * duration / (s2 * s2)};
}

} // namespace specvol
