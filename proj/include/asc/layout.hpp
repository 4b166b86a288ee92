#ifndef ASC_LAYOUT_HPP
#define ASC_LAYOUT_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace asc {

/// Largest vertex count supported by mask operations (2^16 - 1 mask bits).
inline constexpr int kMaxVertices = 16;

/// A nonempty vertex subset as an n-bit word; bit v set means vertex v+1 is in the subset.
using Subset = std::uint32_t;

/// Position of a subset inside a mask.
using NodeIndex = std::size_t;

inline int subset_size(Subset s) { return std::popcount(s); }

inline bool is_subset_of(Subset a, Subset b) { return (a & ~b) == 0; }

/// Exact binomial coefficient for small arguments (n <= 62 keeps every
/// intermediate product in range).
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r / i * (n - k + i) + r % i * (n - k + i) / i;
  }
  return r;
}

struct IndexRange {
  NodeIndex begin = 0;
  NodeIndex end = 0;
  std::size_t size() const { return end - begin; }
};

/// Bijection between mask indices and nonempty subsets of {1..n}.
///
/// Indices are grouped by level d (the d-subsets, i.e. the (d-1)-simplices)
/// in ascending d. Inside a level, subsets follow the lexicographic order of
/// their sorted vertex lists, so for n = 3 the order is
/// {1},{2},{3},{1,2},{1,3},{2,3},{1,2,3}.
class LevelLayout {
 public:
  explicit LevelLayout(int n) : n_(n) {
    if (n < 2 || n > kMaxVertices) {
      throw std::out_of_range("vertex count must lie in [2, " + std::to_string(kMaxVertices) +
                              "], got " + std::to_string(n));
    }
    const std::size_t total = (std::size_t{1} << n) - 1;
    subset_of_.reserve(total);
    index_of_.assign(std::size_t{1} << n, kNoIndex);
    ranges_.resize(static_cast<std::size_t>(n) + 1);

    std::vector<bool> selector(static_cast<std::size_t>(n));
    for (int d = 1; d <= n; ++d) {
      ranges_[d].begin = subset_of_.size();
      std::fill(selector.begin(), selector.end(), false);
      std::fill(selector.begin(), selector.begin() + d, true);
      // prev_permutation over a leading block of `true` walks combinations in lex order.
      do {
        Subset s = 0;
        for (int v = 0; v < n; ++v) {
          if (selector[v]) s |= Subset{1} << v;
        }
        index_of_[s] = subset_of_.size();
        subset_of_.push_back(s);
      } while (std::prev_permutation(selector.begin(), selector.end()));
      ranges_[d].end = subset_of_.size();
    }
  }

  int vertex_count() const { return n_; }

  /// 2^n - 1.
  std::size_t size() const { return subset_of_.size(); }

  Subset full_subset() const { return (Subset{1} << n_) - 1; }

  NodeIndex index_of(Subset s) const {
    if (s == 0 || s > full_subset()) {
      throw std::out_of_range("subset word outside the vertex set");
    }
    return index_of_[s];
  }

  Subset subset_of(NodeIndex idx) const { return subset_of_.at(idx); }

  int level_of(NodeIndex idx) const { return subset_size(subset_of_.at(idx)); }

  /// Contiguous index range of the d-subsets, 1 <= d <= n.
  IndexRange level(int d) const {
    if (d < 1 || d > n_) throw std::out_of_range("level outside [1, n]");
    return ranges_[d];
  }

  bool is_root(NodeIndex idx) const { return idx < static_cast<NodeIndex>(n_); }

  /// Sorted 1-based vertex list of the subset at idx.
  std::vector<int> vertices(NodeIndex idx) const {
    std::vector<int> out;
    const Subset s = subset_of(idx);
    for (int v = 0; v < n_; ++v) {
      if (s & (Subset{1} << v)) out.push_back(v + 1);
    }
    return out;
  }

  // Unchecked lookups for inner loops.
  NodeIndex index_unchecked(Subset s) const { return index_of_[s]; }
  Subset subset_unchecked(NodeIndex idx) const { return subset_of_[idx]; }

 private:
  static constexpr NodeIndex kNoIndex = static_cast<NodeIndex>(-1);

  int n_;
  std::vector<NodeIndex> index_of_;
  std::vector<Subset> subset_of_;
  std::vector<IndexRange> ranges_;
};

inline LevelLayout build_layout(int n) { return LevelLayout(n); }

/// Shared immutable layout for n, built on first use.
inline const LevelLayout& layout_for(int n) {
  if (n < 2 || n > kMaxVertices) {
    throw std::out_of_range("vertex count must lie in [2, " + std::to_string(kMaxVertices) +
                            "], got " + std::to_string(n));
  }
  static std::array<std::once_flag, kMaxVertices + 1> flags;
  static std::array<std::unique_ptr<const LevelLayout>, kMaxVertices + 1> cache;
  std::call_once(flags[n], [n] { cache[n] = std::make_unique<const LevelLayout>(n); });
  return *cache[n];
}

}  // namespace asc

#endif  // ASC_LAYOUT_HPP
