#ifndef ASC_WALK_HPP
#define ASC_WALK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asc/complex.hpp"
#include "asc/random.hpp"
#include "asc/samplers.hpp"

namespace asc {

enum class Move { add, remove, global };

inline std::string_view to_string(Move m) {
  switch (m) {
    case Move::add: return "add";
    case Move::remove: return "remove";
    case Move::global: return "global";
  }
  return "?";
}

/// Parameters of the local walk.
///
/// The jump distance δ ∈ [1, n*] has the state-independent law
/// weight(δ) ∝ exp(-δ / n*), with n* = 2^n - 1 - n the number of flippable
/// nodes. A draw whose δ exceeds the candidate set is discarded and both the
/// direction and the distance are drawn again.
struct WalkConfig {
  int n = 0;
  std::vector<double> distance_weights;  ///< element δ-1 holds weight(δ)
  std::vector<double> cumulative;        ///< running sums of distance_weights
  double mixture_lambda = 1.0;           ///< probability of a local step in mixture_step
  std::size_t max_internal_resamples = 1'000'000;
  /// Include the ratio of truncated-distance normalizers in the acceptance
  /// ratio. Without it the walk is not reversible w.r.t. the uniform law.
  bool truncation_correction = true;

  static WalkConfig make(int n, double lambda = 1.0) {
    const auto& layout = layout_for(n);
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda outside [0, 1]");
    WalkConfig cfg;
    cfg.n = n;
    cfg.mixture_lambda = lambda;
    const std::size_t n_star = layout.size() - static_cast<std::size_t>(n);
    cfg.distance_weights.resize(n_star);
    double total = 0.0;
    for (std::size_t d = 1; d <= n_star; ++d) {
      cfg.distance_weights[d - 1] = std::exp(-static_cast<double>(d) / static_cast<double>(n_star));
      total += cfg.distance_weights[d - 1];
    }
    double running = 0.0;
    cfg.cumulative.resize(n_star);
    for (std::size_t d = 0; d < n_star; ++d) {
      cfg.distance_weights[d] /= total;
      running += cfg.distance_weights[d];
      cfg.cumulative[d] = running;
    }
    return cfg;
  }

  std::size_t max_distance() const { return distance_weights.size(); }

  /// Σ_{δ=1}^{min(m, n*)} weight(δ).
  double truncated_mass(std::size_t m) const {
    if (m == 0) return 0.0;
    return cumulative[std::min(m, max_distance()) - 1];
  }

  std::size_t draw_distance(Rng& rng) const {
    const double u = uniform01(rng) * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                             static_cast<std::ptrdiff_t>(max_distance()) - 1)) + 1;
  }
};

/// Probability that one (direction, distance) draw from c is admissible:
/// ½ W(|removable|) + ½ W(|addable|).
inline double admissible_mass(const NodeSets& sets, const WalkConfig& cfg) {
  return 0.5 * cfg.truncated_mass(sets.removable.size()) + 0.5 * cfg.truncated_mass(sets.addable.size());
}

struct WalkTransition {
  Move direction = Move::add;
  std::size_t distance = 0;           ///< δ, number of flipped nodes
  std::size_t forward_set_size = 0;   ///< |U_F|
  std::size_t backward_set_size = 0;  ///< |U_B|
  double selection_ratio = 1.0;       ///< C(|U_F|, δ) / C(|U_B|, δ)
  double normalizer_ratio = 1.0;      ///< admissible mass of C over that of C'
  double accept_ratio = 1.0;          ///< Hastings ratio used by the filter
  bool accepted = false;
  long signed_displacement = 0;       ///< ‖C‖₁ - ‖C'‖₁, 0 when rejected
};

struct Proposal {
  LabeledComplex candidate;
  WalkTransition transition;
};

struct Step {
  LabeledComplex next;
  WalkTransition transition;
};

namespace detail {

/// C(a, δ) / C(b, δ) as a running product.
inline double binomial_ratio(std::size_t a, std::size_t b, std::size_t delta) {
  double r = 1.0;
  for (std::size_t i = 0; i < delta; ++i) {
    r *= static_cast<double>(a - i) / static_cast<double>(b - i);
  }
  return r;
}

}  // namespace detail

/// Fills the ratio fields for the move c -> candidate that flips `delta`
/// nodes of the `direction` candidate set of c.
inline WalkTransition evaluate_move(const NodeSets& from, const LabeledComplex& candidate,
                                    Move direction, std::size_t delta, const WalkConfig& cfg) {
  const NodeSets to = unconstrained_sets(candidate);
  WalkTransition t;
  t.direction = direction;
  t.distance = delta;
  t.forward_set_size = direction == Move::add ? from.addable.size() : from.removable.size();
  t.backward_set_size = direction == Move::add ? to.removable.size() : to.addable.size();
  if (t.backward_set_size < delta) {
    throw std::logic_error("reverse move is not admissible; flipped set was not independent");
  }
  t.selection_ratio = detail::binomial_ratio(t.forward_set_size, t.backward_set_size, delta);
  t.normalizer_ratio = admissible_mass(from, cfg) / admissible_mass(to, cfg);
  t.accept_ratio = t.selection_ratio * (cfg.truncation_correction ? t.normalizer_ratio : 1.0);
  return t;
}

/// Flips a uniformly chosen δ-subset of the direction's candidate set.
/// Throws when δ exceeds that set.
inline Proposal propose_move(const LabeledComplex& c, const NodeSets& sets, Move direction,
                             std::size_t delta, const WalkConfig& cfg, Rng& rng) {
  if (direction == Move::global) throw std::invalid_argument("local moves are add or remove");
  std::vector<NodeIndex> pool = direction == Move::add ? sets.addable : sets.removable;
  if (delta == 0 || delta > pool.size()) {
    throw std::invalid_argument("distance " + std::to_string(delta) + " is not admissible");
  }
  partial_shuffle(pool, delta, rng);
  LabeledComplex candidate = c;
  for (std::size_t i = 0; i < delta; ++i) candidate.set(pool[i], direction == Move::add);
  WalkTransition t = evaluate_move(sets, candidate, direction, delta, cfg);
  return {std::move(candidate), t};
}

inline Proposal propose_move(const LabeledComplex& c, Move direction, std::size_t delta,
                             const WalkConfig& cfg, Rng& rng) {
  return propose_move(c, unconstrained_sets(c), direction, delta, cfg, rng);
}

/// Draws direction and distance until the move fits the candidate set, then
/// flips a uniform subset of that size.
inline Proposal propose(const LabeledComplex& c, const WalkConfig& cfg, Rng& rng) {
  if (c.vertex_count() != cfg.n) throw std::invalid_argument("walk config is for another n");
  const NodeSets sets = unconstrained_sets(c);
  for (std::size_t attempt = 0; attempt < cfg.max_internal_resamples; ++attempt) {
    const Move direction = uniform01(rng) < 0.5 ? Move::add : Move::remove;
    const std::size_t delta = cfg.draw_distance(rng);
    const auto available = direction == Move::add ? sets.addable.size() : sets.removable.size();
    if (delta <= available) return propose_move(c, sets, direction, delta, cfg, rng);
  }
  throw std::runtime_error("no admissible move after " + std::to_string(cfg.max_internal_resamples) +
                           " internal resamples");
}

inline bool metropolis_accept(double ratio, Rng& rng) {
  return ratio >= 1.0 || uniform01(rng) < ratio;
}

/// Local proposal filtered toward the uniform law on labeled states.
inline Step metropolis_step(const LabeledComplex& c, const WalkConfig& cfg, Rng& rng) {
  Proposal p = propose(c, cfg, rng);
  if (metropolis_accept(p.transition.accept_ratio, rng)) {
    p.transition.accepted = true;
    p.transition.signed_displacement = static_cast<long>(c.popcount()) -
                                       static_cast<long>(p.candidate.popcount());
    return {std::move(p.candidate), p.transition};
  }
  return {c, p.transition};
}

/// Independence proposal from the balanced sampler, accepted with
/// min(1, P_bal(C) / P_bal(C')) so that the uniform law stays invariant.
inline Step global_step(const LabeledComplex& c, Rng& rng) {
  const double current = balanced_log_prob_labeled(c);
  BalancedDraw draw = balanced_sample(c.vertex_count(), rng);
  WalkTransition t;
  t.direction = Move::global;
  for (std::size_t i = 0; i < c.size(); ++i) t.distance += c.bits()[i] != draw.state.bits()[i];
  t.accept_ratio = std::exp(current - draw.trace.log_prob());
  t.selection_ratio = t.accept_ratio;
  if (metropolis_accept(t.accept_ratio, rng)) {
    t.accepted = true;
    t.signed_displacement = static_cast<long>(c.popcount()) - static_cast<long>(draw.state.popcount());
    return {std::move(draw.state), t};
  }
  return {c, t};
}

/// With probability λ a local Metropolis step, otherwise a global balanced proposal.
inline Step mixture_step(const LabeledComplex& c, const WalkConfig& cfg, Rng& rng) {
  if (cfg.mixture_lambda >= 1.0) return metropolis_step(c, cfg, rng);
  if (cfg.mixture_lambda <= 0.0) return global_step(c, rng);
  return uniform01(rng) < cfg.mixture_lambda ? metropolis_step(c, cfg, rng) : global_step(c, rng);
}

/// C*_n.
inline LabeledComplex corner_start(int n) { return complete_state(n); }

/// Complete ⌈n/2⌉-skeleton: every subset of size <= ⌈n/2⌉.
inline LabeledComplex central_start(int n) {
  const auto& layout = layout_for(n);
  const int top = (n + 1) / 2;
  std::vector<std::uint8_t> bits(layout.size(), 0);
  std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(layout.level(top).end), 1);
  return LabeledComplex(n, std::move(bits));
}

/// Runs `steps` mixture steps from `start`, calling
/// visit(step_index, state_after_step, transition) after each one.
template <typename Visitor>
LabeledComplex run_chain(LabeledComplex start, const WalkConfig& cfg, std::size_t steps, Rng& rng,
                         Visitor&& visit) {
  require_closed(start);
  for (std::size_t i = 0; i < steps; ++i) {
    Step s = mixture_step(start, cfg, rng);
    start = std::move(s.next);
    visit(i, static_cast<const LabeledComplex&>(start), static_cast<const WalkTransition&>(s.transition));
  }
  return start;
}

inline std::vector<WalkTransition> walk_trace(const LabeledComplex& start, const WalkConfig& cfg,
                                              std::size_t steps, Rng& rng) {
  std::vector<WalkTransition> trace;
  trace.reserve(steps);
  run_chain(start, cfg, steps, rng,
            [&](std::size_t, const LabeledComplex&, const WalkTransition& t) { trace.push_back(t); });
  return trace;
}

}  // namespace asc

#endif  // ASC_WALK_HPP
