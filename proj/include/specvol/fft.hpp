#pragma once

#include <complex>
#include <span>
#include <vector>

namespace specvol {

/// Unnormalized forward DFT of a real sequence, X_k = sum_j x_j e^{-2 pi i jk/n},
/// returned for all k = 0..n-1 (the upper half filled by conjugate symmetry).
///
/// Backed by FFTW. Plans are created once per length under a lock and then
/// executed on caller-owned buffers, so concurrent calls are safe.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

} // namespace specvol
