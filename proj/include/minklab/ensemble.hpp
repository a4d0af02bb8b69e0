#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace minklab {

inline constexpr int kBlockSize = 4096;

/// Independent generator for (seed, stream, index); std::seed_seq keeps it
/// identical across platforms.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

inline int block_count(int count) { return (count + kBlockSize - 1) / kBlockSize; }

inline int block_length(int count, int block) {
  const int begin = block * kBlockSize;
  return begin + kBlockSize <= count ? kBlockSize : count - begin;
}

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks write into
/// per-index slots so the result does not depend on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& task);

}  // namespace minklab
