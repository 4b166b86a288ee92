#ifndef ASC_RANDOM_HPP
#define ASC_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace asc {

using Rng = std::mt19937_64;

/// Independent stream `stream` derived from a run seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound).
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

/// Moves a uniformly random k-subset of `items` to the front (partial Fisher-Yates).
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

}  // namespace asc

#endif  // ASC_RANDOM_HPP
