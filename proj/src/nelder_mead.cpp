#include "specvol/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace specvol {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double safe(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

} // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t dim = x0.size();
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    return safe(f(x));
  };

  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> fv(dim + 1);
  fv[0] = eval(x0);
  for (std::size_t i = 0; i < dim; ++i) {
    simplex[i + 1][i] += opts.initial_step;
    fv[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto point_along = [&](double coef, const std::vector<double>& worst, std::vector<double>& out) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + coef * (centroid[j] - worst[j]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim > 0 ? dim - 1 : 0];

    const double spread = fv[worst] - fv[best];
    const double scale = std::max(std::abs(fv[best]), 1.0);
    bool done = std::isfinite(fv[best]) && spread <= opts.rel_tol * scale;
    if (done && opts.x_tol > 0.0) {
      double diam = 0.0;
      for (std::size_t i = 0; i <= dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          diam = std::max(diam, std::abs(simplex[i][j] - simplex[best][j]));
        }
      }
      done = diam <= opts.x_tol;
    }
    if (done) {
      res.converged = true;
      break;
    }
    if (res.evals >= opts.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(dim);

    point_along(kReflect, simplex[worst], trial);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      point_along(kExpand, simplex[worst], trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    // Contraction: outside if the reflection improved on the worst point.
    const bool outside = fr < fv[worst];
    point_along(outside ? kContract : -kContract, simplex[worst], trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[i][j] = simplex[best][j] + kShrink * (simplex[i][j] - simplex[best][j]);
      }
      fv[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(fv.begin(), fv.end());
  const auto idx = static_cast<std::size_t>(best_it - fv.begin());
  res.x = simplex[idx];
  res.f = fv[idx];
  return res;
}

} // namespace specvol
