#ifndef ASC_SAMPLERS_HPP
#define ASC_SAMPLERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "asc/complex.hpp"
#include "asc/isomorphism.hpp"
#include "asc/random.hpp"

namespace asc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

inline BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kahle's inductive model Δ(n, p_2, ..., p_n)
// ---------------------------------------------------------------------------

struct KahleParams {
  int n = 0;
  /// p[d - 2] is the inclusion probability for level d, d = 2..n.
  std::vector<double> p;

  static KahleParams uniform(int n, double prob = 0.5) {
    return KahleParams{n, std::vector<double>(static_cast<std::size_t>(std::max(n - 1, 0)), prob)};
  }

  double at_level(int d) const { return p.at(static_cast<std::size_t>(d - 2)); }

  // The endpoints 0 and 1 are accepted as degenerate limits of the model.
  void validate() const {
    layout_for(n);
    if (p.size() != static_cast<std::size_t>(n - 1)) {
      throw std::invalid_argument("Kahle parameters need n - 1 level probabilities");
    }
    for (double x : p) {
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("level probability outside [0, 1]");
    }
  }
};

/// Builds a state level by level from the edges upward; a level-d subset is
/// a candidate only when all of its faces were kept.
inline LabeledComplex kahle_sample(const KahleParams& params, Rng& rng) {
  params.validate();
  LabeledComplex c = empty_state(params.n);
  const auto& layout = c.layout();
  auto bits = c.mutable_bits();
  for (int d = 2; d <= params.n; ++d) {
    const double p = params.at_level(d);
    const auto range = layout.level(d);
    for (NodeIndex i = range.begin; i < range.end; ++i) {
      if (detail::all_faces_present(bits, layout, layout.subset_unchecked(i)) &&
          uniform01(rng) < p) {
        bits[i] = 1;
      }
    }
  }
  return c;
}

/// log P_Δ(C) = Σ_d |α'_d| log p_d + (|α*_d| - |α'_d|) log(1 - p_d).
inline double kahle_log_prob(const LabeledComplex& c, const KahleParams& params) {
  params.validate();
  if (c.vertex_count() != params.n) throw std::invalid_argument("vertex count mismatch");
  require_closed(c);
  const auto census = level_census(c);
  double lp = 0.0;
  for (int d = 2; d <= params.n; ++d) {
    const double present = static_cast<double>(census[d - 1]);
    const double eligible = static_cast<double>(eligible_count(c, d));
    const double p = params.at_level(d);
    if (present > 0) lp += present * std::log(p);
    if (eligible > present) lp += (eligible - present) * std::log1p(-p);
  }
  return lp;
}

/// Minimum Δ_{1/2} probability, attained at C*_n: (1/2)^(2^n - n - 1).
inline double kahle_min_log_prob(int n) {
  return -static_cast<double>((std::uint64_t{1} << n) - n - 1) * std::log(2.0);
}

inline Rational kahle_min_prob_exact(int n) {
  BigInt denom = 1;
  denom <<= static_cast<unsigned>((std::uint64_t{1} << n) - n - 1);
  return Rational(BigInt(1), denom);
}

// ---------------------------------------------------------------------------
// Balanced destructive algorithm
// ---------------------------------------------------------------------------

struct LevelProbabilities {
  double p_level = 0.0;  ///< probability of each nonzero removal count
  double p_zero = 0.0;   ///< probability of removing nothing at this level
};

/// remaining_total = 1 + Σ_{k>=d} (C(n,k) - k̂); remaining_level = C(n,d) - d̂.
inline LevelProbabilities balanced_level_prob(std::size_t remaining_total,
                                              std::size_t remaining_level) {
  if (remaining_total < 1 || remaining_level + 1 > remaining_total) {
    throw std::invalid_argument("balanced level probabilities need 1 <= remaining_level + 1 <= "
                                "remaining_total");
  }
  const double p = 1.0 / static_cast<double>(remaining_total);
  return {p, static_cast<double>(remaining_total - remaining_level) / static_cast<double>(remaining_total)};
}

struct ExactLevelProbabilities {
  Rational p_level;
  Rational p_zero;
};

inline ExactLevelProbabilities balanced_level_prob_exact(std::size_t remaining_total,
                                                         std::size_t remaining_level) {
  balanced_level_prob(remaining_total, remaining_level);
  return {Rational(BigInt(1), BigInt(remaining_total)),
          Rational(BigInt(remaining_total - remaining_level), BigInt(remaining_total))};
}

/// One level of the destructive induction.
struct LevelStep {
  int level = 0;
  std::size_t available = 0;        ///< C(n,d) - d̂
  std::size_t pruned = 0;           ///< d̂
  std::size_t removed = 0;          ///< i_d
  std::size_t remaining_total = 0;  ///< 1 + Σ_{k>=d} (C(n,k) - k̂)
  double p_level = 0.0;
  double p_zero = 0.0;

  bool any_removed() const { return removed > 0; }

  /// -log C(available, removed), the labeled selection factor ξ_L at this level.
  double log_selection() const {
    return -log_binomial(static_cast<double>(available), static_cast<double>(removed));
  }

  double log_prob() const {
    return (any_removed() ? std::log(p_level) : std::log(p_zero)) + log_selection();
  }
};

struct ProbabilityTrace {
  int n = 0;
  std::vector<LevelStep> levels;  ///< levels 2..n in order

  double log_prob() const {
    double lp = 0.0;
    for (const auto& s : levels) lp += s.log_prob();
    return lp;
  }

  Rational exact_prob() const {
    Rational prob = 1;
    for (const auto& s : levels) {
      const auto lvl = balanced_level_prob_exact(s.remaining_total, s.available);
      prob *= s.any_removed() ? lvl.p_level : lvl.p_zero;
      prob /= big_binomial(s.available, s.removed);
    }
    return prob;
  }
};

struct BalancedDraw {
  LabeledComplex state;
  ProbabilityTrace trace;
};

namespace detail {

inline LevelStep make_level_step(int n, int d, std::span<const std::size_t> census) {
  LevelStep step;
  step.level = d;
  step.available = census[d];
  step.pruned = static_cast<std::size_t>(binomial(n, d)) - step.available;
  step.remaining_total = 1;
  for (int k = d; k <= n; ++k) step.remaining_total += census[k];
  const auto probs = balanced_level_prob(step.remaining_total, step.available);
  step.p_level = probs.p_level;
  step.p_zero = probs.p_zero;
  return step;
}

}  // namespace detail

/// Starts from C*_n and, for d = 2..n, removes i_d uniformly chosen level-d
/// nodes (with their cofaces), where i_d = 0 with probability P_{d0} and every
/// nonzero count has probability P_d.
inline BalancedDraw balanced_sample(int n, Rng& rng) {
  LabeledComplex c = complete_state(n);
  const auto& layout = c.layout();
  auto bits = c.mutable_bits();
  auto census = detail::census_of(bits, layout);

  ProbabilityTrace trace{n, {}};
  std::vector<NodeIndex> present;
  for (int d = 2; d <= n; ++d) {
    LevelStep step = detail::make_level_step(n, d, census);
    if (step.available > 0) {
      // Inverse CDF over {0, 1, ..., available}.
      const double u = uniform01(rng);
      if (u >= step.p_zero) {
        const auto k = static_cast<std::size_t>((u - step.p_zero) / step.p_level);
        step.removed = 1 + std::min(k, step.available - 1);
      }
    }
    if (step.removed > 0) {
      present.clear();
      const auto range = layout.level(d);
      for (NodeIndex i = range.begin; i < range.end; ++i) {
        if (bits[i]) present.push_back(i);
      }
      partial_shuffle(present, step.removed, rng);
      for (std::size_t r = 0; r < step.removed; ++r) {
        detail::prune_in_place(bits, layout, layout.subset_unchecked(present[r]), census);
      }
    }
    trace.levels.push_back(step);
  }
  return {std::move(c), std::move(trace)};
}

/// Recovers the unique destructive path that produces c.
///
/// A level-d node is removed directly exactly when it is absent from c while
/// all of its faces are present; every other absent node was pruned from
/// below. Replaying those removals level by level reproduces d̂ and the
/// remaining totals seen by the sampler.
inline ProbabilityTrace balanced_trace_of(const LabeledComplex& c) {
  require_closed(c);
  const int n = c.vertex_count();
  const auto& layout = c.layout();
  LabeledComplex replay = complete_state(n);
  auto bits = replay.mutable_bits();
  auto census = detail::census_of(bits, layout);

  ProbabilityTrace trace{n, {}};
  std::vector<Subset> direct;
  for (int d = 2; d <= n; ++d) {
    LevelStep step = detail::make_level_step(n, d, census);
    direct.clear();
    const auto range = layout.level(d);
    for (NodeIndex i = range.begin; i < range.end; ++i) {
      if (bits[i] && !c.contains(i)) direct.push_back(layout.subset_unchecked(i));
    }
    step.removed = direct.size();
    for (Subset s : direct) detail::prune_in_place(bits, layout, s, census);
    trace.levels.push_back(step);
  }
  if (replay != c) throw std::logic_error("destructive replay did not reproduce the state");
  return trace;
}

/// log P(C) = Σ_d [ j_d log P_d + (1 - j_d) log P_{d0} - log C(available_d, i_d) ].
inline double balanced_log_prob_labeled(const LabeledComplex& c) {
  return balanced_trace_of(c).log_prob();
}

inline Rational balanced_prob_labeled_exact(const LabeledComplex& c) {
  return balanced_trace_of(c).exact_prob();
}

/// Probability that the balanced sampler lands anywhere in c's isomorphism class.
inline double geometric_prob(const LabeledComplex& c) {
  require_closed(c);
  double total = 0.0;
  for (const auto& member : orbit(c)) total += std::exp(balanced_log_prob_labeled(member));
  return total;
}

inline Rational geometric_prob_exact(const LabeledComplex& c) {
  require_closed(c);
  Rational total = 0;
  for (const auto& member : orbit(c)) total += balanced_prob_labeled_exact(member);
  return total;
}

/// E(x): x/2 for even x, (x+1)/2 for odd x.
inline std::uint64_t half_up(std::uint64_t x) { return x % 2 == 0 ? x / 2 : (x + 1) / 2; }

/// Approximate lower bound on labeled balanced probabilities:
/// Π_{d=2}^{E(n)} 1 / ( C(C(n,d), E(C(n,d))) · (1 + Σ_{k=d}^n C(n,k)) ).
inline double balanced_min_log_prob_estimate(int n) {
  layout_for(n);
  double lp = 0.0;
  for (int d = 2; d <= static_cast<int>(half_up(static_cast<std::uint64_t>(n))); ++d) {
    const auto width = binomial(n, d);
    std::uint64_t remaining = 1;
    for (int k = d; k <= n; ++k) remaining += binomial(n, k);
    lp -= log_binomial(static_cast<double>(width), static_cast<double>(half_up(width)));
    lp -= std::log(static_cast<double>(remaining));
  }
  return lp;
}

inline Rational balanced_min_prob_estimate_exact(int n) {
  layout_for(n);
  Rational prob = 1;
  for (int d = 2; d <= static_cast<int>(half_up(static_cast<std::uint64_t>(n))); ++d) {
    const auto width = binomial(n, d);
    std::uint64_t remaining = 1;
    for (int k = d; k <= n; ++k) remaining += binomial(n, k);
    prob /= big_binomial(width, half_up(width)) * BigInt(remaining);
  }
  return prob;
}

}  // namespace asc

#endif  // ASC_SAMPLERS_HPP
