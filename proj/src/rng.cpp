#include "bbga/rng.hpp"

namespace bbga {

__extension__ using u128 = unsigned __int128;

// Lemire's nearly-divisionless bounded sampling.
std::uint64_t uniform_below(Stream& rng, std::uint64_t bound) {
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace bbga
