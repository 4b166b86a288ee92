#ifndef ASC_COMPLEX_HPP
#define ASC_COMPLEX_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asc/layout.hpp"

namespace asc {

/// A labeled state: one bit per nonempty vertex subset, in LevelLayout order.
///
/// The type only stores the mask; closure is a property checked with
/// validate_closure, so malformed masks read from disk can still be held and
/// reported.
class LabeledComplex {
 public:
  LabeledComplex() = default;

  LabeledComplex(int n, std::vector<std::uint8_t> bits) : n_(n), bits_(std::move(bits)) {
    const auto& layout = layout_for(n);
    if (bits_.size() != layout.size()) {
      throw std::invalid_argument("mask length " + std::to_string(bits_.size()) +
                                  " does not match 2^n - 1 = " + std::to_string(layout.size()));
    }
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  int vertex_count() const { return n_; }
  const LevelLayout& layout() const { return layout_for(n_); }
  std::size_t size() const { return bits_.size(); }

  bool contains(NodeIndex idx) const { return bits_.at(idx) != 0; }
  bool contains_subset(Subset s) const { return bits_[layout().index_of(s)] != 0; }

  void set(NodeIndex idx, bool present) { bits_.at(idx) = present ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> mutable_bits() { return bits_; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  /// '0'/'1' characters in layout order.
  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const LabeledComplex&, const LabeledComplex&) = default;
  friend auto operator<=>(const LabeledComplex& a, const LabeledComplex& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct LabeledComplexHash {
  std::size_t operator()(const LabeledComplex& c) const {
    auto bits = c.bits();
    std::string_view view(reinterpret_cast<const char*>(bits.data()), bits.size());
    return std::hash<std::string_view>{}(view) ^ static_cast<std::size_t>(c.vertex_count());
  }
};

/// Removable and addable (unconstrained) nodes of a closed state, as sorted mask indices.
struct NodeSets {
  std::vector<NodeIndex> removable;
  std::vector<NodeIndex> addable;
};

namespace detail {

inline bool all_faces_present(std::span<const std::uint8_t> bits, const LevelLayout& layout,
                              Subset s) {
  if (subset_size(s) <= 1) return true;
  for (Subset rest = s; rest != 0; rest &= rest - 1) {
    const Subset face = s & ~(rest & (~rest + 1));
    if (!bits[layout.index_unchecked(face)]) return false;
  }
  return true;
}

inline bool has_present_coface(std::span<const std::uint8_t> bits, const LevelLayout& layout,
                               Subset s) {
  for (Subset rest = layout.full_subset() & ~s; rest != 0; rest &= rest - 1) {
    const Subset coface = s | (rest & (~rest + 1));
    if (bits[layout.index_unchecked(coface)]) return true;
  }
  return false;
}

/// Clears s and every superset of s. When census is non-empty it holds the
/// per-level present counts (census[d] for level d) and is kept in sync.
/// Returns the number of bits that were cleared.
inline std::size_t prune_in_place(std::span<std::uint8_t> bits, const LevelLayout& layout,
                                  Subset s, std::span<std::size_t> census = {}) {
  const Subset free = layout.full_subset() & ~s;
  std::size_t cleared = 0;
  // Walk every submask x of the complement; s | x ranges over the supersets of s.
  Subset x = free;
  while (true) {
    const Subset t = s | x;
    auto& bit = bits[layout.index_unchecked(t)];
    if (bit) {
      bit = 0;
      ++cleared;
      if (!census.empty()) --census[subset_size(t)];
    }
    if (x == 0) break;
    x = (x - 1) & free;
  }
  return cleared;
}

inline std::vector<std::size_t> census_of(std::span<const std::uint8_t> bits,
                                          const LevelLayout& layout) {
  std::vector<std::size_t> census(static_cast<std::size_t>(layout.vertex_count()) + 1, 0);
  for (NodeIndex i = 0; i < bits.size(); ++i) {
    if (bits[i]) ++census[subset_size(layout.subset_unchecked(i))];
  }
  return census;
}

}  // namespace detail

/// C*_n: every subset present.
inline LabeledComplex complete_state(int n) {
  return LabeledComplex(n, std::vector<std::uint8_t>(layout_for(n).size(), 1));
}

/// C°_n: roots only.
inline LabeledComplex empty_state(int n) {
  std::vector<std::uint8_t> bits(layout_for(n).size(), 0);
  std::fill(bits.begin(), bits.begin() + n, 1);
  return LabeledComplex(n, std::move(bits));
}

/// True iff all roots are present and every present subset has all of its
/// nonempty proper subsets present. Checking codimension-1 faces suffices by
/// induction on level.
inline bool validate_closure(const LabeledComplex& c) {
  const auto& layout = c.layout();
  const auto bits = c.bits();
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (!bits[v]) return false;
  }
  for (NodeIndex i = static_cast<NodeIndex>(c.vertex_count()); i < bits.size(); ++i) {
    if (bits[i] && !detail::all_faces_present(bits, layout, layout.subset_unchecked(i))) {
      return false;
    }
  }
  return true;
}

/// Raw-mask variant; throws when the length does not match 2^n - 1.
inline bool validate_closure(int n, std::span<const std::uint8_t> bits) {
  if (bits.size() != layout_for(n).size()) {
    throw std::invalid_argument("mask length does not match 2^n - 1");
  }
  return validate_closure(LabeledComplex(n, {bits.begin(), bits.end()}));
}

inline void require_closed(const LabeledComplex& c) {
  if (!validate_closure(c)) {
    throw std::invalid_argument("state violates simplicial closure: " + c.to_string());
  }
}

/// Removes idx together with every coface of its subset.
inline LabeledComplex prune_cofaces(const LabeledComplex& c, NodeIndex idx) {
  const auto& layout = c.layout();
  if (idx >= layout.size()) throw std::out_of_range("mask index out of range");
  if (layout.is_root(idx)) throw std::invalid_argument("roots cannot be pruned");
  LabeledComplex out = c;
  detail::prune_in_place(out.mutable_bits(), layout, layout.subset_of(idx));
  return out;
}

inline NodeSets unconstrained_sets(const LabeledComplex& c) {
  require_closed(c);
  const auto& layout = c.layout();
  const auto bits = c.bits();
  NodeSets out;
  for (NodeIndex i = static_cast<NodeIndex>(c.vertex_count()); i < bits.size(); ++i) {
    const Subset s = layout.subset_unchecked(i);
    if (bits[i]) {
      if (!detail::has_present_coface(bits, layout, s)) out.removable.push_back(i);
    } else if (detail::all_faces_present(bits, layout, s)) {
      out.addable.push_back(i);
    }
  }
  return out;
}

/// Present counts per level; element d-1 holds level d.
inline std::vector<std::size_t> level_census(const LabeledComplex& c) {
  auto census = detail::census_of(c.bits(), c.layout());
  return {census.begin() + 1, census.end()};
}

/// Number of level-d subsets whose codimension-1 faces are all present in c.
inline std::size_t eligible_count(const LabeledComplex& c, int d) {
  const auto& layout = c.layout();
  const auto range = layout.level(d);
  std::size_t count = 0;
  for (NodeIndex i = range.begin; i < range.end; ++i) {
    if (detail::all_faces_present(c.bits(), layout, layout.subset_unchecked(i))) ++count;
  }
  return count;
}

// Mask text format: the vertex count on one line, then 2^n - 1 characters of
// '0'/'1' in layout order. Lines starting with '#' are comments.

inline LabeledComplex parse_mask(int n, std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      bits.push_back(ch == '1');
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      throw std::invalid_argument(std::string("invalid mask character '") + ch + "'");
    }
  }
  return LabeledComplex(n, std::move(bits));
}

inline std::string format_mask_text(const LabeledComplex& c) {
  return std::to_string(c.vertex_count()) + "\n" + c.to_string() + "\n";
}

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

inline int parse_vertex_count(const std::string& line) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(line, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected vertex count, got '" + line + "'");
  }
  if (used != line.size()) throw std::invalid_argument("expected vertex count, got '" + line + "'");
  layout_for(n);
  return n;
}

}  // namespace detail

/// Reads a vertex-count header followed by one or more mask lines.
inline std::vector<LabeledComplex> read_mask_stream(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw std::invalid_argument("empty mask stream");
  const int n = detail::parse_vertex_count(line);
  std::vector<LabeledComplex> out;
  while (detail::next_content_line(in, line)) out.push_back(parse_mask(n, line));
  return out;
}

/// Reads exactly one state in mask text format.
inline LabeledComplex read_mask_text(std::istream& in) {
  auto states = read_mask_stream(in);
  if (states.size() != 1) {
    throw std::invalid_argument("expected exactly one mask, found " + std::to_string(states.size()));
  }
  return states.front();
}

inline LabeledComplex parse_mask_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_mask_text(in);
}

}  // namespace asc

#endif  // ASC_COMPLEX_HPP
