#include "specvol/rng.hpp"

namespace specvol {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                             Stream stream) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ path_index);
  return mix64(h ^ (static_cast<std::uint64_t>(stream) + 0x632be59bd9b4e019ULL));
}

} // namespace specvol
