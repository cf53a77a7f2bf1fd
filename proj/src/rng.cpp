#include "keygraph/rng.hpp"

#include <stdexcept>

namespace keygraph {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  std::seed_seq seq{lo32(seed), hi32(seed)};
  engine_.seed(seq);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t grid_point,
                     std::uint64_t trial) {
  std::seed_seq seq{lo32(master_seed), hi32(master_seed), lo32(grid_point),
                    hi32(grid_point),  lo32(trial),       hi32(trial)};
  engine_.seed(seq);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  u128 m = static_cast<u128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

RngStream derive_trial_stream(std::uint64_t master_seed,
                              std::uint64_t grid_point_index,
                              std::uint64_t trial_index) {
  return RngStream(master_seed, grid_point_index, trial_index);
}

}  // namespace keygraph
