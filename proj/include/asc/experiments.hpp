#ifndef ASC_EXPERIMENTS_HPP
#define ASC_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "asc/diagnostics.hpp"
#include "asc/isomorphism.hpp"
#include "asc/samplers.hpp"
#include "asc/walk.hpp"

namespace asc {

/// Geometric classes visited by one sampler, in visiting order.
struct SamplerStream {
  GeometricBinner bins;
  std::vector<std::size_t> class_sequence;  ///< bin position of every sample

  void add(const LabeledComplex& c) { class_sequence.push_back(bins.add(c)); }

  std::vector<std::size_t> unique_curve(std::span<const std::size_t> checkpoints) const {
    return unique_states_curve<std::size_t>(class_sequence, checkpoints);
  }
};

struct BreadthComparison {
  int n = 0;
  std::size_t budget = 0;
  SamplerStream walk;
  SamplerStream balanced;
  SamplerStream kahle;
  std::size_t walk_steps = 0;  ///< chain steps spent to reach `budget` accepted transitions
  double walk_rejection_rate = 0.0;
};

/// Three-sampler breadth experiment with a matched budget: `budget` accepted
/// local-walk transitions (Metropolis, from the central start) against
/// `budget` independent draws each from the balanced and Kahle-½ samplers.
/// The samplers use streams 0, 1 and 2 of `seed`.
inline BreadthComparison compare_samplers(int n, std::size_t budget, std::uint64_t seed) {
  BreadthComparison out;
  out.n = n;
  out.budget = budget;

  {
    Rng rng = make_stream(seed, 0);
    const WalkConfig cfg = WalkConfig::make(n, 1.0);
    LabeledComplex state = central_start(n);
    const std::size_t step_limit = 1000 * budget + 1000;
    std::size_t accepted = 0;
    while (accepted < budget) {
      if (out.walk_steps >= step_limit) throw std::runtime_error("walk failed to reach its budget");
      Step s = metropolis_step(state, cfg, rng);
      ++out.walk_steps;
      if (s.transition.accepted) {
        ++accepted;
        state = std::move(s.next);
        out.walk.add(state);
      }
    }
    out.walk_rejection_rate =
        1.0 - static_cast<double>(accepted) / static_cast<double>(out.walk_steps);
  }
  {
    Rng rng = make_stream(seed, 1);
    for (std::size_t i = 0; i < budget; ++i) out.balanced.add(balanced_sample(n, rng).state);
  }
  {
    Rng rng = make_stream(seed, 2);
    const auto params = KahleParams::uniform(n);
    for (std::size_t i = 0; i < budget; ++i) out.kahle.add(kahle_sample(params, rng));
  }
  return out;
}

}  // namespace asc

#endif  // ASC_EXPERIMENTS_HPP
