#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "specvol/error.hpp"
#include "specvol/sdesim.hpp"
#include "specvol/whittle.hpp"

using namespace specvol;

namespace {

/// Periodogram equal to the model spectrum: the likelihood peaks exactly at the truth.
Periodogram model_periodogram(std::size_t n, double sig2_x, const NoiseSpec& noise) {
  Periodogram per{Grid(n, 1.0 / 252.0), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) per.s[k] = sig2_x + noise_spectrum(noise, k, n);
  return per;
}

void check_same_spectrum(const NoiseSpec& a, const NoiseSpec& b, std::size_t n) {
  for (std::size_t k = 1; k < n / 2; ++k) {
    REQUIRE(testing::rel_diff(noise_spectrum(a, k, n), noise_spectrum(b, k, n)) < 1e-10);
  }
}

std::vector<std::complex<double>> ma_roots(const std::vector<double>& theta) {
  // Durand-Kerner on 1 + sum theta_m z^m, independent of the library's solver.
  const std::size_t q = theta.size();
  std::vector<std::complex<double>> z(q);
  for (std::size_t i = 0; i < q; ++i) z[i] = std::pow(std::complex<double>(0.4, 0.9), double(i));
  auto p = [&](std::complex<double> x) {
    std::complex<double> acc = theta[q - 1];
    for (std::size_t m = q - 1; m > 0; --m) acc = acc * x + theta[m - 1];
    return acc * x + 1.0;
  };
  for (int it = 0; it < 500; ++it) {
    for (std::size_t i = 0; i < q; ++i) {
      std::complex<double> den = theta[q - 1];
      for (std::size_t j = 0; j < q; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      z[i] -= p(z[i]) / den;
    }
  }
  return z;
}

} // namespace

TEST_CASE("loglik of a flat periodogram under the matching flat model") {
  const std::size_t n = 1000;
  const double c = 3.7e-9;
  Periodogram per{Grid(n, 1.0), std::vector<double>(n, c)};
  const double expected = -static_cast<double>(n / 2 - 1) * (std::log(c) + 1.0);
  CHECK(whittle_loglik(per, c, NoiseSpec::white(0.0)) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("loglik matches an independent hand sum") {
  const std::vector<double> d{0.3, -1.2, 0.7, 0.05, -0.4, 1.1, -0.9, 0.25};
  const auto per = periodogram(IncrementSeries{Grid(8, 1.0), d});
  // Periodogram and loglik computed separately with numpy.
  CHECK(per.s[1] == doctest::Approx(0.08053147672739626).epsilon(1e-13));
  CHECK(per.s[3] == doctest::Approx(2.014468523272604).epsilon(1e-13));
  CHECK(whittle_loglik(per, 0.3, NoiseSpec::ma({0.4}, 0.2)) ==
        doctest::Approx(-1.7358667280780162).epsilon(1e-13));
  CHECK_THROWS_AS(whittle_loglik(per, 0.0, NoiseSpec::white(0.0)), DomainError);
}

TEST_CASE("AICC formula") {
  CHECK(aicc(100.0, 0, 100) == doctest::Approx(-200.0 + 2.0 * 2.0 * 100.0 / 97.0));
  CHECK(aicc(100.0, 3, 100) == doctest::Approx(-200.0 + 2.0 * 5.0 * 100.0 / 94.0));
}

TEST_CASE("white fit on a flat periodogram drives the noise to the boundary") {
  const std::size_t n = 2340;
  Periodogram per{Grid(n, 1.0), std::vector<double>(n, 5e-9)};
  const auto fit = fit_white(per);
  CHECK(fit.sig2_x == doctest::Approx(5e-9).epsilon(1e-6));
  CHECK(fit.noise.sig2 < 1e-6 * 5e-9);
  CHECK(fit.boundary);
}

TEST_CASE("inverse crime: exact spectra are recovered") {
  const std::size_t n = 23400;
  SUBCASE("white") {
    const auto per = model_periodogram(n, 6.8e-9, NoiseSpec::white(2.5e-7));
    const auto fit = fit_white(per);
    CHECK(fit.converged);
    CHECK(testing::rel_diff(fit.sig2_x, 6.8e-9) < 1e-6);
    CHECK(testing::rel_diff(fit.noise.sig2, 2.5e-7) < 1e-6);
    CHECK_FALSE(fit.boundary);
    CHECK(fit.loglik >= fit.loglik_init);
    CHECK(fit.n_freq == n / 2 - 1);
  }
  SUBCASE("MA(1)") {
    const auto per = model_periodogram(n, 6.8e-9, NoiseSpec::ma({0.5}, 2.5e-7));
    const auto fit = fit_ma(per, 1);
    CHECK(testing::rel_diff(fit.sig2_x, 6.8e-9) < 1e-6);
    CHECK(testing::rel_diff(fit.noise.sig2, 2.5e-7) < 1e-6);
    CHECK(fit.noise.theta[0] == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("MA(2)") {
    const auto per = model_periodogram(n, 6.8e-9, NoiseSpec::ma({0.4, -0.3}, 2.5e-7));
    const auto fit = fit_ma(per, 2);
    CHECK(testing::rel_diff(fit.sig2_x, 6.8e-9) < 1e-6);
    CHECK(testing::rel_diff(fit.noise.sig2, 2.5e-7) < 1e-6);
    CHECK(fit.noise.theta[0] == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(fit.noise.theta[1] == doctest::Approx(-0.3).epsilon(1e-6));
  }
}

TEST_CASE("invertible form preserves the spectrum") {
  const std::size_t n = 512;
  SUBCASE("MA(1) reflection") {
    const auto inv = invertible_form(NoiseSpec::ma({2.0}, 1.0));
    CHECK(inv.theta[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inv.sig2 == doctest::Approx(4.0).epsilon(1e-12));
    check_same_spectrum(inv, NoiseSpec::ma({2.0}, 1.0), n);
  }
  SUBCASE("already invertible input is unchanged") {
    const auto spec = NoiseSpec::ma({0.8, -0.6, -0.1, 0.4}, 2.0);
    const auto inv = invertible_form(spec);
    CHECK(inv.theta == spec.theta);
    CHECK(inv.sig2 == spec.sig2);
  }
  SUBCASE("root inside the unit circle is moved outside") {
    const auto spec = NoiseSpec::ma({0.8, -0.6, 0.1, 0.4}, 1.0);
    bool inside = false;
    for (auto z : ma_roots(spec.theta)) inside = inside || std::abs(z) < 1.0;
    CHECK(inside);
    const auto inv = invertible_form(spec);
    for (auto z : ma_roots(inv.theta)) CHECK(std::abs(z) >= 1.0 - 1e-9);
    check_same_spectrum(spec, inv, n);
    // Independent numpy reflection of the root at |z| = 0.883.
    CHECK(inv.theta[0] == doctest::Approx(0.551).epsilon(2e-3));
    CHECK(inv.sig2 / spec.sig2 == doctest::Approx(1.282).epsilon(2e-3));
  }
  SUBCASE("white noise passes through") {
    const auto w = NoiseSpec::white(3.0);
    CHECK(invertible_form(w).sig2 == 3.0);
  }
}

TEST_CASE("order selection with q_max = 0 is the white fit") {
  const auto per = model_periodogram(2340, 6.8e-9, NoiseSpec::white(2.5e-7));
  const auto sel = select_order_aicc(per, 0);
  const auto white = fit_white(per);
  CHECK(sel.q_star == 0);
  CHECK(sel.fit.sig2_x == white.sig2_x);
  CHECK(sel.fit.noise.sig2 == white.noise.sig2);
  CHECK(sel.table.size() == 1);
}

TEST_CASE("order selection on an MA(4) path") {
  const Grid g = Grid::trading_day();
  const auto latent = simulate_heston(HestonParams{}, g, 404);
  const auto obs = observe(latent, NoiseSpec::ma({0.8, -0.6, 0.1, 0.4}, 2.5e-7), 405);
  const auto per = periodogram(increments(obs));
  const auto sel = select_order_aicc(per, 6);
  CHECK(sel.q_star == 4);
  REQUIRE(sel.table.size() == 7);
  for (const auto& row : sel.table) {
    REQUIRE(row.fit);
    CHECK(row.fit->aicc >= sel.fit.aicc);
  }
  // The fitted MA(4) is the invertible member of the truth's spectral class.
  const auto target = invertible_form(NoiseSpec::ma({0.8, -0.6, 0.1, 0.4}, 2.5e-7));
  for (std::size_t m = 0; m < 4; ++m) {
    CHECK(std::abs(sel.fit.noise.theta[m] - target.theta[m]) < 0.05);
  }
  // An extra coefficient is estimated near zero.
  CHECK(std::abs(sel.table[5].fit->noise.theta[4]) < 0.05);
}

TEST_CASE("multiscale ratio") {
  const std::size_t n = 23400;
  const auto none = multiscale_ratio(6.8e-9, NoiseSpec::white(0.0), n);
  for (double l : none.l) REQUIRE(l == 1.0);

  const auto rc = multiscale_ratio(6.8e-9, NoiseSpec::white(2.5e-7), n);
  CHECK(rc.l[0] == 1.0);
  CHECK(rc.l[n / 2] == doctest::Approx(6.754072308303535e-3).epsilon(1e-12));
  for (std::size_t k = 1; k < n; ++k) {
    REQUIRE(rc.l[k] >= 0.0);
    REQUIRE(rc.l[k] <= 1.0);
    REQUIRE(rc.l[k] == doctest::Approx(rc.l[n - k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(multiscale_ratio(0.0, NoiseSpec::white(0.0), n), DomainError);
}
