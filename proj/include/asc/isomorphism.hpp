#ifndef ASC_ISOMORPHISM_HPP
#define ASC_ISOMORPHISM_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "asc/complex.hpp"

namespace asc {

/// Canonical labeling enumerates all n! vertex permutations.
inline constexpr int kMaxIsomorphismVertices = 8;

/// Isomorphism class representative: the lexicographically smallest mask
/// over all vertex relabelings, plus the number of distinct labeled masks in
/// the class.
struct GeometricKey {
  LabeledComplex canonical;
  std::size_t orbit_size = 0;

  /// Canonical mask as hex, four mask bits per digit (first bit most
  /// significant), zero-padded at the end.
  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const auto bits = canonical.bits();
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
      unsigned nibble = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        nibble <<= 1;
        if (i + j < bits.size() && bits[i + j]) nibble |= 1;
      }
      out.push_back(kDigits[nibble]);
    }
    return out;
  }

  friend bool operator==(const GeometricKey& a, const GeometricKey& b) {
    return a.canonical == b.canonical;
  }
};

namespace detail {

// Mask of up to 256 bits, index i at word i / 64, bit 63 - i % 64, so that
// comparing the word arrays compares the masks as '0'/'1' strings.
using PackedMask = std::array<std::uint64_t, 4>;

inline void set_packed(PackedMask& m, std::size_t i) {
  m[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
}

inline bool test_packed(const PackedMask& m, std::size_t i) {
  return (m[i >> 6] >> (63 - (i & 63))) & 1;
}

/// For every vertex permutation (in lexicographic order, identity first),
/// the image index of each mask index.
class PermutationTable {
 public:
  explicit PermutationTable(int n) : n_(n) {
    const auto& layout = layout_for(n);
    width_ = layout.size();
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      for (NodeIndex i = 0; i < width_; ++i) {
        const Subset s = layout.subset_unchecked(i);
        Subset image = 0;
        for (int v = 0; v < n; ++v) {
          if (s & (Subset{1} << v)) image |= Subset{1} << sigma[v];
        }
        images_.push_back(static_cast<std::uint8_t>(layout.index_unchecked(image)));
      }
      ++count_;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }

  std::size_t permutation_count() const { return count_; }

  std::span<const std::uint8_t> images(std::size_t perm) const {
    return std::span<const std::uint8_t>(images_).subspan(perm * width_, width_);
  }

 private:
  int n_;
  std::size_t width_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> images_;
};

inline const PermutationTable& permutation_table(int n) {
  if (n < 2 || n > kMaxIsomorphismVertices) {
    throw std::out_of_range("isomorphism routines support 2 <= n <= " +
                            std::to_string(kMaxIsomorphismVertices) + ", got " + std::to_string(n));
  }
  static std::array<std::once_flag, kMaxIsomorphismVertices + 1> flags;
  static std::array<std::unique_ptr<const PermutationTable>, kMaxIsomorphismVertices + 1> cache;
  std::call_once(flags[n], [n] { cache[n] = std::make_unique<const PermutationTable>(n); });
  return *cache[n];
}

inline std::vector<NodeIndex> present_indices(const LabeledComplex& c) {
  std::vector<NodeIndex> out;
  const auto bits = c.bits();
  for (NodeIndex i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

inline PackedMask permuted_packed(std::span<const NodeIndex> present,
                                  std::span<const std::uint8_t> images) {
  PackedMask m{};
  for (NodeIndex i : present) set_packed(m, images[i]);
  return m;
}

inline LabeledComplex unpack(int n, const PackedMask& m) {
  std::vector<std::uint8_t> bits(layout_for(n).size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = test_packed(m, i);
  return LabeledComplex(n, std::move(bits));
}

inline std::vector<PackedMask> orbit_packed(const LabeledComplex& c) {
  const auto& table = permutation_table(c.vertex_count());
  const auto present = present_indices(c);
  std::vector<PackedMask> images;
  images.reserve(table.permutation_count());
  for (std::size_t p = 0; p < table.permutation_count(); ++p) {
    images.push_back(permuted_packed(present, table.images(p)));
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

}  // namespace detail

/// Applies the vertex relabeling v -> sigma[v] (0-based) to every subset.
inline LabeledComplex permute(const LabeledComplex& c, std::span<const int> sigma) {
  const int n = c.vertex_count();
  if (sigma.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("permutation length must equal n");
  }
  std::vector<int> check(sigma.begin(), sigma.end());
  std::sort(check.begin(), check.end());
  for (int v = 0; v < n; ++v) {
    if (check[v] != v) throw std::invalid_argument("not a permutation of 0..n-1");
  }
  const auto& layout = c.layout();
  std::vector<std::uint8_t> bits(layout.size(), 0);
  for (NodeIndex i = 0; i < layout.size(); ++i) {
    if (!c.contains(i)) continue;
    const Subset s = layout.subset_unchecked(i);
    Subset image = 0;
    for (int v = 0; v < n; ++v) {
      if (s & (Subset{1} << v)) image |= Subset{1} << sigma[v];
    }
    bits[layout.index_unchecked(image)] = 1;
  }
  return LabeledComplex(n, std::move(bits));
}

/// Lexicographically smallest relabeling of c. Cheaper than canonical_key
/// because the orbit is not materialized.
inline LabeledComplex canonical_mask(const LabeledComplex& c) {
  const auto& table = detail::permutation_table(c.vertex_count());
  const auto present = detail::present_indices(c);
  detail::PackedMask best = detail::permuted_packed(present, table.images(0));
  for (std::size_t p = 1; p < table.permutation_count(); ++p) {
    const auto m = detail::permuted_packed(present, table.images(p));
    if (m < best) best = m;
  }
  return detail::unpack(c.vertex_count(), best);
}

inline GeometricKey canonical_key(const LabeledComplex& c) {
  const auto orbit = detail::orbit_packed(c);
  return GeometricKey{detail::unpack(c.vertex_count(), orbit.front()), orbit.size()};
}

/// Every distinct labeled mask reachable from c by relabeling vertices, in
/// lexicographic order.
inline std::vector<LabeledComplex> orbit(const LabeledComplex& c) {
  std::vector<LabeledComplex> out;
  for (const auto& m : detail::orbit_packed(c)) out.push_back(detail::unpack(c.vertex_count(), m));
  return out;
}

/// Number of vertex permutations that fix c.
inline std::size_t automorphism_count(const LabeledComplex& c) {
  const auto& table = detail::permutation_table(c.vertex_count());
  const auto present = detail::present_indices(c);
  const auto self = detail::permuted_packed(present, table.images(0));
  std::size_t count = 0;
  for (std::size_t p = 0; p < table.permutation_count(); ++p) {
    if (detail::permuted_packed(present, table.images(p)) == self) ++count;
  }
  return count;
}

struct Bin {
  GeometricKey key;
  std::size_t multiplicity = 0;
  std::size_t first_seen_index = 0;
};

/// Accumulates multiplicities per isomorphism class in first-encounter order.
class GeometricBinner {
 public:
  /// Returns the bin position of the sample's class.
  std::size_t add(const LabeledComplex& c) {
    if (n_ == 0) {
      detail::permutation_table(c.vertex_count());
      n_ = c.vertex_count();
    } else if (c.vertex_count() != n_) {
      throw std::invalid_argument("cannot bin states with different vertex counts");
    }
    auto canonical = canonical_mask(c);
    auto [it, inserted] = lookup_.try_emplace(canonical, bins_.size());
    if (inserted) {
      const std::size_t orbit_size = detail::orbit_packed(canonical).size();
      bins_.push_back(Bin{GeometricKey{std::move(canonical), orbit_size}, 0, seen_});
    }
    ++bins_[it->second].multiplicity;
    ++seen_;
    return it->second;
  }

  const std::vector<Bin>& bins() const { return bins_; }
  std::size_t sample_count() const { return seen_; }

  std::vector<std::size_t> multiplicities() const {
    std::vector<std::size_t> out;
    out.reserve(bins_.size());
    for (const auto& b : bins_) out.push_back(b.multiplicity);
    return out;
  }

 private:
  int n_ = 0;
  std::size_t seen_ = 0;
  std::vector<Bin> bins_;
  std::unordered_map<LabeledComplex, std::size_t, LabeledComplexHash> lookup_;
};

template <typename Range>
GeometricBinner bin_samples(const Range& samples) {
  GeometricBinner binner;
  for (const auto& c : samples) binner.add(c);
  return binner;
}

}  // namespace asc

#endif  // ASC_ISOMORPHISM_HPP
