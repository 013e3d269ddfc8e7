#include "specvol/kernel.hpp"

#include <cmath>
#include <cstdlib>

#include "specvol/error.hpp"
#include "specvol/fft.hpp"

namespace specvol {

Kernel kernel_from_ratio(const RatioCurve& rc) {
  const std::size_t n = rc.l.size();
  // For a symmetric real sequence the inverse transform equals the forward
  // transform's real part.
  const auto spec = real_dft(rc.l);
  Kernel k{std::vector<double>(n), KernelForm::numeric};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t tau = 0; tau < n; ++tau) k.l[tau] = spec[tau].real() * inv_n;
  for (std::size_t tau = 1; tau < n; ++tau) {
    // Enforce exact circular symmetry against round-off.
    if (tau < n - tau) {
      const double avg = 0.5 * (k.l[tau] + k.l[n - tau]);
      k.l[tau] = avg;
      k.l[n - tau] = avg;
    }
  }
  return k;
}

double kernel_closed_form(double sig2_x, double sig2_eps, long tau) {
  if (!(sig2_x > 0.0) || !(sig2_eps > 0.0)) {
    throw InvalidParameter("kernel: variances must be positive");
  }
  if (sig2_x == sig2_eps) {
    throw DomainError("kernel: closed form undefined at equal signal and noise variance");
  }
  const double t = static_cast<double>(std::labs(tau));
  if (sig2_eps < sig2_x) return std::pow(sig2_eps / sig2_x, t);
  const double ratio = std::sqrt(sig2_x / sig2_eps);
  return 0.5 * ratio * std::pow(1.0 - ratio, t);
}

double kernel_laplace(double sig2_x, double sig2_eps, long tau) {
  if (!(sig2_x > 0.0) || !(sig2_eps > 0.0)) {
    throw InvalidParameter("kernel: variances must be positive");
  }
  const double ratio = std::sqrt(sig2_x / sig2_eps);
  return 0.5 * ratio * std::exp(-ratio * static_cast<double>(std::labs(tau)));
}

std::vector<double> circular_autocovariance(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lag = j >= u ? j - u : j + n - u;
      acc += d[lag] * d[j];
    }
    c[u] = acc;
  }
  return c;
}

double time_domain_m1(std::span<const double> d, const Kernel& kern) {
  const std::size_t n = d.size();
  if (kern.l.size() != n) throw InvariantViolation("time_domain_m1: kernel length must equal N");
  const auto c = circular_autocovariance(d);
  double acc = kern.l[0] * c[0];
  for (std::size_t u = 1; u < n; ++u) acc += kern.l[n - u] * c[u];
  return acc;
}

} // namespace specvol
