#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

/// M intervals drawn independently, with replacement, uniformly over the pairs
/// (s, e) inside `within` with e - s >= min_len. Deterministic per seed.
/// Throws NoAdmissibleInterval when within.length() <= min_len.
std::vector<Interval> draw_intervals(std::size_t n, std::size_t M, std::size_t min_len, std::uint64_t seed,
                                     Interval within);

inline std::vector<Interval> draw_intervals(std::size_t n, std::size_t M, std::size_t min_len, std::uint64_t seed) {
  return draw_intervals(n, M, min_len, seed, Interval{1, n});
}

}  // namespace lqcp
