#include "lqcp/intervals.hpp"

#include <random>
#include <string>

#include "lqcp/parallel.hpp"

namespace lqcp {

std::vector<Interval> draw_intervals(std::size_t n, std::size_t M, std::size_t min_len, std::uint64_t seed,
                                     Interval within) {
  make_interval(within.s, within.e, n);
  const std::size_t w = within.length();
  if (w <= min_len) {
    throw Error(ErrorCode::NoAdmissibleInterval,
                "no interval with e - s >= " + std::to_string(min_len) + " fits in a window of length " + std::to_string(w));
  }
  // Pairs with e - s = d number w - d; enumerate d ascending, then s ascending.
  const std::size_t span = w - min_len;  // d ranges over min_len .. w-1
  const std::uint64_t total = static_cast<std::uint64_t>(span) * (span + 1) / 2;
  auto rng = make_stream(seed, 0, 0x1a7e5);
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  std::vector<Interval> out;
  out.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    std::uint64_t idx = pick(rng);
    std::size_t d = min_len;
    std::uint64_t block = w - d;
    while (idx >= block) {
      idx -= block;
      ++d;
      block = w - d;
    }
    const std::size_t s = within.s + static_cast<std::size_t>(idx);
    out.push_back(Interval{s, s + d});
  }
  return out;
}

}  // namespace lqcp
