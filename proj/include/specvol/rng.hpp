#pragma once

#include <cstdint>
#include <random>

namespace specvol {

/// Independent random streams used by one Monte Carlo path.
enum class Stream : std::uint64_t {
  latent = 0,
  noise = 1,
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed for substream `stream` of path `path_index` under `master_seed`.
///
/// Distinct (path, stream) pairs give unrelated seeds, so paths can be
/// simulated in any order or on any thread with identical results.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                             Stream stream) noexcept;

/// Standard normal variates from a 64-bit Mersenne Twister.
class NormalSource {
public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return dist_(engine_); }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

} // namespace specvol
