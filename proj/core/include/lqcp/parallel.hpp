#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace lqcp {

/// Worker count actually used for a requested cap; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically, so fn must only write to per-index state. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Independent generator for stream `index` of a seeded family. The state
/// depends only on (seed, index, tag), never on scheduling.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0);

/// Seed drawn from the system entropy source, for callers that were not given one.
std::uint64_t fresh_seed();

}  // namespace lqcp
