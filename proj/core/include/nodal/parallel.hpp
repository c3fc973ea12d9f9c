#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace nodal {

/// Worker count: NODAL_LAB_THREADS when set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs task(i) for i in [0, n). Tasks must write only to their own slots;
/// callers reduce in index order so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent RNG substream owned by task `index`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(substream_seed(seed, index));
}

}  // namespace nodal
