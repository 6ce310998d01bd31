#ifndef ROTTING_SEEDING_HPP
#define ROTTING_SEEDING_HPP

#include <cstdint>
#include <random>

#include "rotting/env.hpp"

namespace rotting {

/// Independent random streams used inside one trajectory.
enum class Stream : std::uint32_t {
  kRewards = 0,  // environment noise, consumed in pull order
  kPolicy = 1,   // tie-breaking inside policies
  kProfile = 2,  // per-trajectory resampling of arm parameters
  kGridBlock = 3,  // master seed of the grid-search seed block
};

/// Generator for stream `stream` of trajectory `index` under `master`.
/// std::seed_seq is fully specified by the standard, so the mapping is
/// portable across standard library implementations.
inline Rng child_rng(std::uint64_t master, std::uint64_t index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace rotting

#endif  // ROTTING_SEEDING_HPP
