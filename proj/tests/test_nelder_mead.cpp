#include <doctest.h>

#include <cmath>
#include <limits>

#include "specvol/nelder_mead.hpp"

using namespace specvol;

TEST_CASE("simplex minimizes a shifted quadratic") {
  auto f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0) + 3.0;
  };
  NelderMeadOptions o;
  o.rel_tol = 1e-14;
  o.max_evals = 5000;
  const auto r = nelder_mead(f, {0.0, 0.0}, o);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(r.f == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("simplex solves the Rosenbrock valley") {
  auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions o;
  o.rel_tol = 1e-16;
  o.x_tol = 1e-9;
  o.max_evals = 20000;
  const auto r = nelder_mead(f, {-1.2, 1.0}, o);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("result is never worse than the start and NaN is avoided") {
  auto f = [](std::span<const double> x) {
    return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 2.0) * (x[0] - 2.0);
  };
  const auto r = nelder_mead(f, {0.5});
  CHECK(std::isfinite(r.f));
  CHECK(r.f <= f(std::vector<double>{0.5}));
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("evaluation budget is respected") {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  NelderMeadOptions o;
  o.max_evals = 10;
  o.rel_tol = 0.0;
  const auto r = nelder_mead(f, {5.0, 5.0}, o);
  CHECK_FALSE(r.converged);
  CHECK(r.evals <= 12);
}
