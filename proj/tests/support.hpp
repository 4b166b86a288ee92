// Shared test helpers: literal masks, binomial tolerance checks and an
// explicit transition-kernel construction for the local walk.
#ifndef ASC_TESTS_SUPPORT_HPP
#define ASC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "asc/asc.hpp"

namespace asc::test {

/// State from a '0'/'1' literal such as "1111100".
inline LabeledComplex mask(int n, const std::string& bits) { return parse_mask(n, bits); }

/// |observed - N p| <= k sqrt(N p (1 - p)).
inline bool within_binomial_sigma(std::size_t observed, std::size_t trials, double p, double k) {
  const double mean = static_cast<double>(trials) * p;
  const double sigma = std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
  return std::abs(static_cast<double>(observed) - mean) <= k * sigma;
}

/// Calls visit(indices) for every k-subset of {0..m-1} in lex order.
template <typename Visitor>
void for_each_combination(std::size_t m, std::size_t k, Visitor&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > m) return;
  while (true) {
    visit(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct Kernel {
  std::vector<LabeledComplex> states;
  std::vector<std::vector<double>> matrix;  // matrix[i][j] = P(i -> j)
};

/// Transition matrix of metropolis_step over the given states, assembled by
/// summing, for every admissible (direction, distance, subset), the proposal
/// probability ½ w(δ) / Z(C) / C(|U|, δ) times min(1, accept_ratio). Z(C) is
/// the admissible mass of the joint (direction, distance) draw, recomputed
/// here from the raw weights.
inline Kernel build_walk_kernel(const std::vector<LabeledComplex>& states, const WalkConfig& cfg) {
  Kernel k;
  k.states = states;
  std::map<LabeledComplex, std::size_t> position;
  for (std::size_t i = 0; i < states.size(); ++i) position[states[i]] = i;
  k.matrix.assign(states.size(), std::vector<double>(states.size(), 0.0));

  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& c = states[i];
    const NodeSets sets = unconstrained_sets(c);
    double z = 0.0;
    for (const auto* pool : {&sets.addable, &sets.removable}) {
      for (std::size_t d = 1; d <= std::min(pool->size(), cfg.max_distance()); ++d) {
        z += 0.5 * cfg.distance_weights[d - 1];
      }
    }
    double moved = 0.0;
    for (Move dir : {Move::add, Move::remove}) {
      const auto& pool = dir == Move::add ? sets.addable : sets.removable;
      for (std::size_t d = 1; d <= std::min(pool.size(), cfg.max_distance()); ++d) {
        const double subsets = static_cast<double>(binomial(pool.size(), d));
        const double q = 0.5 * cfg.distance_weights[d - 1] / z / subsets;
        for_each_combination(pool.size(), d, [&](const std::vector<std::size_t>& pick) {
          LabeledComplex cand = c;
          for (auto p : pick) cand.set(pool[p], dir == Move::add);
          const auto t = evaluate_move(sets, cand, dir, d, cfg);
          const double prob = q * std::min(1.0, t.accept_ratio);
          k.matrix[i][position.at(cand)] += prob;
          moved += prob;
        });
      }
    }
    k.matrix[i][i] += 1.0 - moved;
  }
  return k;
}

inline double max_row_sum_error(const Kernel& k) {
  double worst = 0.0;
  for (const auto& row : k.matrix) {
    double s = 0.0;
    for (double x : row) s += x;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

inline bool irreducible(const Kernel& k) {
  const std::size_t m = k.matrix.size();
  for (std::size_t src = 0; src < m; ++src) {
    std::vector<bool> seen(m, false);
    std::queue<std::size_t> q;
    q.push(src);
    seen[src] = true;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (std::size_t v = 0; v < m; ++v) {
        if (!seen[v] && k.matrix[u][v] > 0.0) {
          seen[v] = true;
          q.push(v);
        }
      }
    }
    if (std::count(seen.begin(), seen.end(), true) != static_cast<std::ptrdiff_t>(m)) return false;
  }
  return true;
}

/// max_j |(u K)_j - u_j| for the uniform row vector u.
inline double uniform_stationarity_error(const Kernel& k) {
  const std::size_t m = k.matrix.size();
  const double u = 1.0 / static_cast<double>(m);
  double worst = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u * k.matrix[i][j];
    worst = std::max(worst, std::abs(s - u));
  }
  return worst;
}

}  // namespace asc::test

#endif  // ASC_TESTS_SUPPORT_HPP
