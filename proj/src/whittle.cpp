#include "specvol/whittle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "specvol/error.hpp"
#include "specvol/nelder_mead.hpp"

namespace specvol {
namespace {

constexpr double kVarianceFloor = 1e-300;
const double kLogFloor = std::log(kVarianceFloor);
constexpr double kBoundaryFraction = 1e-3;

double to_variance(double u) { return std::exp(std::max(u, kLogFloor)); }

/// Likelihood over the used frequencies in the coordinates
/// u = (log sig2_x, log sig2_noise, theta_1..theta_q).
class SpectralModel {
public:
  SpectralModel(const Periodogram& per, std::size_t q) : q_(q) {
    const std::size_t n = per.grid.n();
    for (std::size_t k = per.first_used(); k < per.end_used(); ++k) {
      p_.push_back(per.s[k]);
      g_.push_back(difference_gain(k, n));
    }
    if (q_ > 0) {
      cos_.resize(q_ * p_.size());
      sin_.resize(q_ * p_.size());
      for (std::size_t i = 0; i < p_.size(); ++i) {
        const double f = static_cast<double>(i + per.first_used()) / static_cast<double>(n);
        for (std::size_t m = 1; m <= q_; ++m) {
          const double w = 2.0 * std::numbers::pi * f * static_cast<double>(m);
          cos_[i * q_ + m - 1] = std::cos(w);
          sin_[i * q_ + m - 1] = std::sin(w);
        }
      }
    }
  }

  std::size_t size() const noexcept { return p_.size(); }
  std::size_t dim() const noexcept { return q_ + 2; }
  std::span<const double> power() const noexcept { return p_; }
  std::span<const double> gain() const noexcept { return g_; }

  double loglik(std::span<const double> u) const {
    const double a = to_variance(u[0]);
    const double b = to_variance(u[1]);
    double acc = 0.0;
    if (q_ == 0) {
      for (std::size_t i = 0; i < p_.size(); ++i) {
        const double s = a + b * g_[i];
        acc += std::log(s) + p_[i] / s;
      }
    } else {
      for (std::size_t i = 0; i < p_.size(); ++i) {
        const double s = a + b * ma_factor(u, i) * g_[i];
        if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
        acc += std::log(s) + p_[i] / s;
      }
    }
    return -acc;
  }

  /// Score vector and expected information in u coordinates.
  void score_info(std::span<const double> u, Eigen::VectorXd& grad, Eigen::MatrixXd& info) const {
    const std::size_t d = dim();
    grad.setZero(static_cast<Eigen::Index>(d));
    info.setZero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const double a = to_variance(u[0]);
    const double b = to_variance(u[1]);
    Eigen::VectorXd ds(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < p_.size(); ++i) {
      double re = 1.0, im = 0.0;
      for (std::size_t m = 0; m < q_; ++m) {
        re += u[2 + m] * cos_[i * q_ + m];
        im += u[2 + m] * sin_[i * q_ + m];
      }
      const double gain = re * re + im * im;
      const double s = a + b * gain * g_[i];
      ds[0] = a;
      ds[1] = b * gain * g_[i];
      for (std::size_t m = 0; m < q_; ++m) {
        ds[static_cast<Eigen::Index>(2 + m)] =
            b * g_[i] * 2.0 * (re * cos_[i * q_ + m] + im * sin_[i * q_ + m]);
      }
      const double inv = 1.0 / s;
      grad += ((p_[i] * inv - 1.0) * inv) * ds;
      info.noalias() += (inv * inv) * ds * ds.transpose();
    }
  }

private:
  double ma_factor(std::span<const double> u, std::size_t i) const {
    double re = 1.0, im = 0.0;
    const double* c = &cos_[i * q_];
    const double* s = &sin_[i * q_];
    for (std::size_t m = 0; m < q_; ++m) {
      re += u[2 + m] * c[m];
      im += u[2 + m] * s[m];
    }
    return re * re + im * im;
  }

  std::size_t q_;
  std::vector<double> p_, g_, cos_, sin_;
};

/// Damped Fisher scoring from `u`; only accepts steps that raise the likelihood.
double polish(const SpectralModel& model, std::vector<double>& u, double f) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd info;
  double damping = 1e-3;
  std::vector<double> trial(u.size());
  for (int iter = 0; iter < 100; ++iter) {
    model.score_info(u, grad, info);
    bool accepted = false;
    while (damping < 1e12) {
      Eigen::MatrixXd a = info;
      const double ridge = 1e-14 * std::max(info.diagonal().maxCoeff(), 1e-300);
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        a(i, i) += damping * info(i, i) + ridge;
      }
      const Eigen::VectorXd step = a.ldlt().solve(grad);
      if (!step.allFinite()) {
        damping *= 10.0;
        continue;
      }
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = u[i] + step[static_cast<Eigen::Index>(i)];
      }
      trial[0] = std::max(trial[0], kLogFloor);
      trial[1] = std::max(trial[1], kLogFloor);
      const double ft = model.loglik(trial);
      if (ft > f) {
        const double gain = ft - f;
        u = trial;
        f = ft;
        damping = std::max(damping * 0.1, 1e-12);
        accepted = true;
        if (gain <= 1e-15 * std::abs(f)) return f;
        break;
      }
      damping *= 10.0;
    }
    if (!accepted) break;
  }
  return f;
}

struct Start {
  std::vector<double> u;
};

WhittleFit run_fit(const Periodogram& per, std::size_t q, const FitOptions& opts,
                   const std::vector<Start>& starts, double init_x, double init_noise) {
  const SpectralModel model(per, q);
  if (model.size() < q + 4) {
    throw InvalidParameter("whittle: too few frequencies for the requested MA order");
  }
  NelderMeadOptions nm;
  nm.rel_tol = opts.rel_tol;
  nm.max_evals = opts.max_evals_per_dim * model.dim();
  nm.initial_step = 0.5;
  auto objective = [&model](std::span<const double> u) { return -model.loglik(u); };

  WhittleFit fit;
  fit.q = q;
  fit.n_freq = model.size();
  fit.loglik_init = model.loglik(starts.front().u);

  std::vector<double> best_u;
  double best_f = std::numeric_limits<double>::infinity();
  const std::size_t n_starts = std::max<std::size_t>(1, std::min(opts.multistarts, starts.size()));
  for (std::size_t s = 0; s < n_starts; ++s) {
    const auto r = nelder_mead(objective, starts[s].u, nm);
    fit.evaluations += r.evals;
    fit.converged = fit.converged || r.converged;
    if (r.f < best_f) {
      best_f = r.f;
      best_u = r.x;
    }
  }

  double ll = -best_f;
  if (opts.polish && std::isfinite(ll)) ll = polish(model, best_u, ll);

  fit.sig2_x = to_variance(best_u[0]);
  fit.noise.sig2 = to_variance(best_u[1]);
  fit.noise.theta.assign(best_u.begin() + 2, best_u.end());
  if (q > 0) {
    // The likelihood cannot tell a polynomial from its root reflections.
    const NoiseSpec inv = invertible_form(fit.noise);
    if (inv.theta != fit.noise.theta) {
      fit.noise = inv;
      ll = whittle_loglik(per, fit.sig2_x, fit.noise);
    }
  }
  fit.loglik = ll;
  fit.aicc = aicc(ll, q, fit.n_freq);
  fit.boundary = fit.sig2_x < kBoundaryFraction * init_x ||
                 fit.noise.sig2 < kBoundaryFraction * init_noise;
  if (!fit.converged) {
    throw FitFailed("whittle: simplex did not reach tolerance within the evaluation budget", fit);
  }
  return fit;
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Moment-matched starting values: low-frequency level for the signal and
/// a quarter of the near-Nyquist level for the noise.
std::pair<double, double> moment_start(const Periodogram& per) {
  const std::size_t n_used = per.used_count();
  if (n_used < 1) throw InvalidParameter("whittle: no usable frequencies");
  std::span<const double> used(per.s.data() + per.first_used(), n_used);
  const std::size_t n_low = std::max<std::size_t>(1, n_used / 20);
  const std::size_t n_high = std::max<std::size_t>(1, n_used / 10);
  double a0 = mean_of(used.first(n_low));
  double b0 = mean_of(used.last(n_high)) / 4.0;
  const double level = mean_of(used);
  if (!(level > 0.0)) throw DomainError("whittle: periodogram vanishes at all used frequencies");
  a0 = std::max(a0, 1e-12 * level);
  b0 = std::max(b0, 1e-12 * level);
  return {a0, b0};
}

std::vector<Start> variance_starts(double a0, double b0, std::span<const double> theta) {
  static constexpr double kOffsets[3][2] = {{0.0, 0.0}, {1.0, -1.0}, {-1.0, 1.0}};
  std::vector<Start> starts;
  for (const auto& off : kOffsets) {
    Start s;
    s.u = {std::log(a0) + off[0], std::log(b0) + off[1]};
    s.u.insert(s.u.end(), theta.begin(), theta.end());
    starts.push_back(std::move(s));
  }
  return starts;
}

} // namespace

double whittle_loglik(const Periodogram& per, double sig2_x, const NoiseSpec& noise) {
  const std::size_t n = per.grid.n();
  double acc = 0.0;
  for (std::size_t k = per.first_used(); k < per.end_used(); ++k) {
    const double s = sig2_x + noise_spectrum(noise, k, n);
    if (!(s > 0.0)) {
      throw DomainError("whittle: model spectrum is not positive at k = " + std::to_string(k));
    }
    acc += std::log(s) + per.s[k] / s;
  }
  return -acc;
}

double aicc(double loglik, std::size_t q, std::size_t n_freq) {
  const double n = static_cast<double>(n_freq);
  const double p = static_cast<double>(q);
  return -2.0 * loglik + 2.0 * (p + 2.0) * n / (n - p - 3.0);
}

NoiseSpec invertible_form(const NoiseSpec& noise) {
  std::size_t deg = noise.theta.size();
  while (deg > 0 && noise.theta[deg - 1] == 0.0) --deg;
  if (deg == 0) return noise;

  // Companion matrix of the monic polynomial z^deg + ... + 1/theta_deg.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                               static_cast<Eigen::Index>(deg));
  const double lead = noise.theta[deg - 1];
  for (std::size_t i = 0; i < deg; ++i) {
    const double c = i == 0 ? 1.0 : noise.theta[i - 1];
    comp(0, static_cast<Eigen::Index>(deg - 1 - i)) = -c / lead;
  }
  for (std::size_t i = 1; i < deg; ++i) {
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  const Eigen::VectorXcd roots = comp.eigenvalues();

  double scale = 1.0;
  bool reflected = false;
  std::vector<std::complex<double>> coef{1.0};
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    std::complex<double> z = roots[i];
    if (std::abs(z) < 1.0) {
      scale /= std::norm(z);
      z = 1.0 / std::conj(z);
      reflected = true;
    }
    // Multiply by (1 - x / z).
    coef.push_back(0.0);
    for (std::size_t m = coef.size() - 1; m > 0; --m) coef[m] -= coef[m - 1] / z;
  }
  if (!reflected) return noise;

  NoiseSpec out = noise;
  out.sig2 = noise.sig2 * scale;
  for (std::size_t m = 1; m <= deg; ++m) out.theta[m - 1] = coef[m].real();
  return out;
}

WhittleFit fit_white(const Periodogram& per, const FitOptions& opts) {
  const auto [a0, b0] = moment_start(per);
  return run_fit(per, 0, opts, variance_starts(a0, b0, {}), a0, b0);
}

WhittleFit fit_ma(const Periodogram& per, std::size_t q, const FitOptions& opts,
                  const WhittleFit* warm) {
  if (q == 0) throw InvalidParameter("fit_ma: q must be >= 1");
  if (per.used_count() <= q + 2) {
    throw InvalidParameter("fit_ma: need more than q + 2 frequencies");
  }
  WhittleFit white;
  if (warm == nullptr) {
    try {
      white = fit_white(per, opts);
    } catch (const FitFailed& e) {
      white = e.best();
    }
    warm = &white;
  }
  const double a0 = std::max(warm->sig2_x, 1e-300);
  const double b0 = std::max(warm->noise.sig2, 1e-300);

  std::vector<double> zeros(q, 0.0);
  auto starts = variance_starts(a0, b0, zeros);
  if (!warm->noise.theta.empty() && warm->noise.theta.size() < q) {
    // Continue from the lower-order solution padded with zeros.
    std::vector<double> padded = warm->noise.theta;
    padded.resize(q, 0.0);
    Start s;
    s.u = {std::log(a0), std::log(b0)};
    s.u.insert(s.u.end(), padded.begin(), padded.end());
    starts.insert(starts.begin() + 1, std::move(s));
  }
  return run_fit(per, q, opts, starts, a0, b0);
}

OrderSelection select_order_aicc(const Periodogram& per, std::size_t q_max,
                                 const FitOptions& opts) {
  OrderSelection sel;
  std::optional<WhittleFit> white;
  std::optional<WhittleFit> previous;
  for (std::size_t q = 0; q <= q_max; ++q) {
    OrderRow row;
    row.q = q;
    try {
      if (q == 0) {
        row.fit = fit_white(per, opts);
        white = row.fit;
      } else {
        const WhittleFit* warm = previous ? &*previous : (white ? &*white : nullptr);
        row.fit = fit_ma(per, q, opts, warm);
      }
      previous = row.fit;
    } catch (const FitFailed& e) {
      row.error = e.what();
      if (q == 0) white = e.best();
    } catch (const std::invalid_argument& e) {
      row.error = e.what();
    }
    sel.table.push_back(std::move(row));
  }

  const OrderRow* best = nullptr;
  for (const auto& row : sel.table) {
    if (!row.fit) continue;
    if (best == nullptr) {
      best = &row;
      continue;
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best->fit->aicc));
    if (row.fit->aicc < best->fit->aicc - tol) best = &row;
  }
  if (best == nullptr) throw FitFailed("aicc: every candidate order failed to fit", WhittleFit{});
  sel.q_star = best->q;
  sel.fit = *best->fit;
  return sel;
}

RatioCurve multiscale_ratio(double sig2_x, const NoiseSpec& noise, std::size_t n) {
  if (!(sig2_x > 0.0) && !(noise.sig2 > 0.0)) {
    throw DomainError("multiscale ratio: signal and noise variances are both zero");
  }
  RatioCurve rc{std::vector<double>(n)};
  rc.l[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double noise_k = noise_spectrum(noise, k, n);
    const double denom = sig2_x + noise_k;
    rc.l[k] = denom > 0.0 ? sig2_x / denom : 1.0;
  }
  return rc;
}

RatioCurve multiscale_ratio(const WhittleFit& fit, const Grid& g) {
  return multiscale_ratio(fit.sig2_x, fit.noise, g.n());
}

} // namespace specvol
