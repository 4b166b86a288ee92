#ifndef ASC_ORACLE_HPP
#define ASC_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "asc/complex.hpp"
#include "asc/diagnostics.hpp"
#include "asc/isomorphism.hpp"

namespace asc {

/// Largest n enumerated without an explicit opt-in.
inline constexpr int kDefaultEnumerationCap = 5;

struct GeometricClass {
  GeometricKey key;
  std::size_t size = 0;  ///< labeled states in the class
};

struct EnumerationResult {
  int n = 0;
  std::vector<LabeledComplex> labeled_states;
  std::vector<GeometricClass> geometric_classes;  ///< first-encounter order
  std::vector<std::size_t> class_of;              ///< class position per labeled state

  std::size_t labeled_count() const { return labeled_states.size(); }
  std::size_t geometric_count() const { return geometric_classes.size(); }
};

namespace detail {

template <typename Visitor>
void enumerate_from_level(std::vector<std::uint8_t>& bits, const LevelLayout& layout, int d,
                          Visitor& visit) {
  const int n = layout.vertex_count();
  std::vector<NodeIndex> eligible;
  if (d <= n) {
    const auto range = layout.level(d);
    for (NodeIndex i = range.begin; i < range.end; ++i) {
      if (all_faces_present(bits, layout, layout.subset_unchecked(i))) eligible.push_back(i);
    }
  }
  if (eligible.empty()) {
    // Nothing fits at this level, so nothing fits above it either.
    visit(LabeledComplex(n, bits));
    return;
  }
  if (eligible.size() >= 63) throw std::length_error("eligible set too large to enumerate");
  const std::uint64_t choices = std::uint64_t{1} << eligible.size();
  for (std::uint64_t pick = 0; pick < choices; ++pick) {
    for (std::size_t j = 0; j < eligible.size(); ++j) bits[eligible[j]] = (pick >> j) & 1;
    enumerate_from_level(bits, layout, d + 1, visit);
  }
  for (NodeIndex i : eligible) bits[i] = 0;
}

}  // namespace detail

/// Calls visit(state) once for every closed labeled state on n vertices.
/// Levels are filled in ascending order; at each level every subset of the
/// nodes whose faces are all present is tried.
template <typename Visitor>
void for_each_labeled(int n, Visitor&& visit) {
  const auto& layout = layout_for(n);
  std::vector<std::uint8_t> bits(layout.size(), 0);
  std::fill(bits.begin(), bits.begin() + n, 1);
  detail::enumerate_from_level(bits, layout, 2, visit);
}

/// All labeled states with their isomorphism classes. n above 5 requires
/// allow_large (n = 6 yields millions of states).
inline EnumerationResult enumerate_labeled(int n, bool allow_large = false) {
  if (n > kDefaultEnumerationCap && !allow_large) {
    throw std::out_of_range("enumeration is capped at n = " + std::to_string(kDefaultEnumerationCap) +
                            "; pass allow_large for n = " + std::to_string(n));
  }
  if (n > kMaxIsomorphismVertices) throw std::out_of_range("enumeration needs n <= 8");
  EnumerationResult out;
  out.n = n;
  for_each_labeled(n, [&](LabeledComplex c) { out.labeled_states.push_back(std::move(c)); });

  std::unordered_map<LabeledComplex, std::size_t, LabeledComplexHash> lookup;
  out.class_of.reserve(out.labeled_states.size());
  for (const auto& c : out.labeled_states) {
    auto canonical = canonical_mask(c);
    auto [it, inserted] = lookup.try_emplace(canonical, out.geometric_classes.size());
    if (inserted) out.geometric_classes.push_back(GeometricClass{GeometricKey{canonical, 0}, 0});
    ++out.geometric_classes[it->second].size;
    out.class_of.push_back(it->second);
  }
  for (auto& cls : out.geometric_classes) cls.key.orbit_size = cls.size;
  return out;
}

/// Independent route: tests every assignment of the non-root bits against
/// validate_closure. Only feasible for n <= 4.
inline std::vector<LabeledComplex> enumerate_by_filter(int n) {
  if (n > 4) throw std::out_of_range("brute-force filtering is limited to n <= 4");
  const auto& layout = layout_for(n);
  const std::size_t free_bits = layout.size() - static_cast<std::size_t>(n);
  std::vector<LabeledComplex> out;
  std::vector<std::uint8_t> bits(layout.size(), 0);
  std::fill(bits.begin(), bits.begin() + n, 1);
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << free_bits); ++pick) {
    for (std::size_t j = 0; j < free_bits; ++j) bits[n + j] = (pick >> j) & 1;
    LabeledComplex c(n, bits);
    if (validate_closure(c)) out.push_back(std::move(c));
  }
  return out;
}

struct ExactDistribution {
  std::vector<double> state_probs;  ///< aligned with EnumerationResult::labeled_states
  std::vector<double> class_probs;  ///< aligned with EnumerationResult::geometric_classes
  double total = 0.0;
};

using LogProbFn = std::function<double(const LabeledComplex&)>;

inline ExactDistribution exact_distribution(const LogProbFn& log_prob, const EnumerationResult& states) {
  ExactDistribution out;
  out.state_probs.reserve(states.labeled_count());
  out.class_probs.assign(states.geometric_count(), 0.0);
  for (std::size_t i = 0; i < states.labeled_count(); ++i) {
    const double p = std::exp(log_prob(states.labeled_states[i]));
    out.state_probs.push_back(p);
    out.class_probs[states.class_of[i]] += p;
    out.total += p;
  }
  return out;
}

inline ExactDistribution exact_distribution(const LogProbFn& log_prob, int n) {
  return exact_distribution(log_prob, enumerate_labeled(n));
}

struct UniformityReport {
  std::vector<double> residuals;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Residuals (count - mean) / total plus Pearson's chi-square against `expected`
/// (probabilities aligned with counts).
inline UniformityReport uniformity_test(std::span<const std::size_t> counts,
                                        std::span<const double> expected) {
  if (counts.empty()) throw std::invalid_argument("no bins");
  if (counts.size() != expected.size()) throw std::invalid_argument("expected distribution size mismatch");
  UniformityReport r;
  r.residuals = multiplicity_residuals(counts);
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double e = total * expected[b];
    const double o = static_cast<double>(counts[b]);
    if (e <= 0.0) {
      if (o > 0.0) r.chi_square = std::numeric_limits<double>::infinity();
      continue;
    }
    r.chi_square += (o - e) * (o - e) / e;
  }
  r.degrees_of_freedom = counts.size() - 1;
  if (r.degrees_of_freedom == 0) {
    r.p_value = 1.0;
  } else if (std::isinf(r.chi_square)) {
    r.p_value = 0.0;
  } else {
    boost::math::chi_squared dist(static_cast<double>(r.degrees_of_freedom));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.chi_square));
  }
  return r;
}

/// Uniform expectation over `bins` classes.
inline UniformityReport uniformity_test(std::span<const std::size_t> counts) {
  std::vector<double> expected(counts.size(), 1.0 / static_cast<double>(counts.size()));
  return uniformity_test(counts, expected);
}

}  // namespace asc

#endif  // ASC_ORACLE_HPP
