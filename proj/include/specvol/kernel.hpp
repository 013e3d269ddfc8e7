#pragma once

#include <span>
#include <vector>

#include "specvol/whittle.hpp"

namespace specvol {

enum class KernelForm { numeric, closed_low_noise, closed_high_noise, laplace };

/// Time-domain smoothing window over circular lags tau = 0..N-1.
struct Kernel {
  std::vector<double> l;
  KernelForm form = KernelForm::numeric;
};

/// l_tau = (1/N) sum_k L_k e^{2 pi i k tau / N}; real because L_k = L_{N-k}.
Kernel kernel_from_ratio(const RatioCurve& rc);

/// Leading term of the white-noise kernel:
///   (sig2_eps / sig2_x)^tau                                      if sig2_eps < sig2_x
///   sigma_x / (2 sigma_eps) (1 - sigma_x / sigma_eps)^tau        if sig2_eps > sig2_x
/// Throws DomainError when the variances are equal.
double kernel_closed_form(double sig2_x, double sig2_eps, long tau);

/// Laplace window sigma_x / (2 sigma_eps) exp(-(sigma_x / sigma_eps) |tau|).
double kernel_laplace(double sig2_x, double sig2_eps, long tau);

/// Circular autocovariance c_u = sum_j d_{j-u} d_j of the increments.
std::vector<double> circular_autocovariance(std::span<const double> d);

/// sum_u l_{-u} c_u: the multiscale estimate computed in the time domain.
double time_domain_m1(std::span<const double> d, const Kernel& kern);

} // namespace specvol
