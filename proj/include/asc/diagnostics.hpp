#ifndef ASC_DIAGNOSTICS_HPP
#define ASC_DIAGNOSTICS_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "asc/walk.hpp"

namespace asc {

/// Per-step signed displacements and their running sum.
struct DisplacementSeries {
  std::vector<double> deltas;
  std::vector<double> trajectory;
};

inline DisplacementSeries displacement_series(std::span<const WalkTransition> trace) {
  if (trace.empty()) throw std::invalid_argument("displacement series needs a nonempty trace");
  DisplacementSeries out;
  out.deltas.reserve(trace.size());
  out.trajectory.reserve(trace.size());
  double running = 0.0;
  for (const auto& t : trace) {
    const double d = t.accepted ? static_cast<double>(t.signed_displacement) : 0.0;
    running += d;
    out.deltas.push_back(d);
    out.trajectory.push_back(running);
  }
  return out;
}

inline double sample_mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// γ̂_k = (1/s) Σ_{i=1}^{s-k} (x_i - μ̂)(x_{i+k} - μ̂) for k = 0..k_max.
inline std::vector<double> autocovariance(std::span<const double> xs, std::size_t k_max) {
  if (xs.size() <= k_max) throw std::invalid_argument("series must be longer than k_max");
  const double mu = sample_mean(xs);
  const double s = static_cast<double>(xs.size());
  std::vector<double> centered(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) centered[i] = xs[i] - mu;
  std::vector<double> gamma(k_max + 1, 0.0);
  for (std::size_t k = 0; k <= k_max; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < centered.size(); ++i) acc += centered[i] * centered[i + k];
    gamma[k] = acc / s;
  }
  return gamma;
}

inline std::size_t default_k_max(std::size_t length) {
  return std::min<std::size_t>(length / 4, 512);
}

struct AutocorrReport {
  std::string observable;
  double mean = 0.0;
  std::vector<double> gamma;
  std::vector<double> gamma_pairs;  ///< Γ̂_k = γ̂_{2k} + γ̂_{2k+1}
  std::size_t cutoff_lag = 0;       ///< 2k' for the first k' with Γ̂_{k'} <= 0
  bool censored = false;            ///< no nonpositive Γ̂ found; cutoff_lag = k_max
  double rejection_rate = 0.0;
};

/// Pairs consecutive autocovariances and locates the first nonpositive pair.
/// No convex-minorant smoothing is applied.
inline AutocorrReport gcm_cutoff(std::span<const double> gamma) {
  if (gamma.size() < 2) throw std::invalid_argument("need at least two autocovariances");
  AutocorrReport r;
  r.gamma.assign(gamma.begin(), gamma.end());
  for (std::size_t k = 0; 2 * k + 1 < gamma.size(); ++k) {
    r.gamma_pairs.push_back(gamma[2 * k] + gamma[2 * k + 1]);
  }
  const auto it = std::find_if(r.gamma_pairs.begin(), r.gamma_pairs.end(),
                               [](double g) { return g <= 0.0; });
  if (it == r.gamma_pairs.end()) {
    r.censored = true;
    r.cutoff_lag = gamma.size() - 1;
  } else {
    r.cutoff_lag = 2 * static_cast<std::size_t>(it - r.gamma_pairs.begin());
  }
  return r;
}

enum class Observable { delta, trajectory };

inline std::string to_string(Observable o) { return o == Observable::delta ? "delta" : "trajectory"; }

inline Observable parse_observable(const std::string& s) {
  if (s == "delta") return Observable::delta;
  if (s == "trajectory") return Observable::trajectory;
  throw std::invalid_argument("unknown observable '" + s + "' (expected delta or trajectory)");
}

inline AutocorrReport analyze_series(std::span<const double> xs, const std::string& observable,
                                     std::size_t k_max) {
  AutocorrReport r = gcm_cutoff(autocovariance(xs, k_max));
  r.observable = observable;
  r.mean = sample_mean(xs);
  return r;
}

/// Full report for a walk trace on the chosen observable. k_max = 0 selects
/// min(length / 4, 512), raised to 1 for very short traces.
inline AutocorrReport analyze_trace(std::span<const WalkTransition> trace, Observable observable,
                                    std::size_t k_max = 0) {
  const auto series = displacement_series(trace);
  const auto& xs = observable == Observable::delta ? series.deltas : series.trajectory;
  if (k_max == 0) k_max = std::max<std::size_t>(1, default_k_max(xs.size()));
  AutocorrReport r = analyze_series(xs, to_string(observable), k_max);
  std::size_t rejected = 0;
  for (const auto& t : trace) rejected += !t.accepted;
  r.rejection_rate = static_cast<double>(rejected) / static_cast<double>(trace.size());
  return r;
}

/// Distinct keys seen within the first `checkpoint` elements, per checkpoint.
template <typename Key, typename Hash = std::hash<Key>>
std::vector<std::size_t> unique_states_curve(std::span<const Key> keys,
                                             std::span<const std::size_t> checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be sorted");
  }
  std::unordered_set<Key, Hash> seen;
  std::vector<std::size_t> out;
  out.reserve(checkpoints.size());
  std::size_t consumed = 0;
  for (std::size_t cp : checkpoints) {
    const std::size_t stop = std::min(cp, keys.size());
    for (; consumed < stop; ++consumed) seen.insert(keys[consumed]);
    out.push_back(seen.size());
  }
  return out;
}

/// (count_b - mean count) / total for each bin, in the given order.
inline std::vector<double> multiplicity_residuals(std::span<const std::size_t> counts) {
  if (counts.empty()) throw std::invalid_argument("no bins");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double mean = total / static_cast<double>(counts.size());
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto c : counts) out.push_back((static_cast<double>(c) - mean) / total);
  return out;
}

/// max - min of the residual vector.
inline double residual_spread(std::span<const double> residuals) {
  const auto [lo, hi] = std::minmax_element(residuals.begin(), residuals.end());
  return *hi - *lo;
}

}  // namespace asc

#endif  // ASC_DIAGNOSTICS_HPP
