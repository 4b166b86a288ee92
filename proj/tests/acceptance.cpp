// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "support.hpp"

namespace {

using namespace asc;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

using StateIndex = std::unordered_map<LabeledComplex, std::size_t, LabeledComplexHash>;

StateIndex index_states(const std::vector<LabeledComplex>& states) {
  StateIndex index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);
  return index;
}

// Largest deviation, in binomial standard deviations, of the observed counts
// from the expected state probabilities.
double max_sigma(const std::vector<std::size_t>& counts, const std::vector<double>& probs, std::size_t trials) {
  double worst = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double mean = trials * probs[i];
    const double sd = std::sqrt(trials * probs[i] * (1.0 - probs[i]));
    const double dev = std::abs(static_cast<double>(counts[i]) - mean);
    worst = std::max(worst, sd > 0 ? dev / sd : (dev > 0 ? INFINITY : 0.0));
  }
  return worst;
}

void criterion1(Outcome& o) {
  Rng rng = make_stream(1001);
  GeometricBinner binner;
  for (int i = 0; i < 10000; ++i) binner.add(balanced_sample(3, rng).state);
  const auto chi = uniformity_test(binner.multiplicities());
  const auto exact = exact_distribution([](const LabeledComplex& c) { return balanced_log_prob_labeled(c); }, 3);
  double worst = 0.0;
  for (double p : exact.class_probs) worst = std::max(worst, std::abs(p - 0.2));
  o.detail << "classes=" << binner.bins().size() << " chi2_p=" << chi.p_value << " max|P-1/5|=" << worst;
  o.require(binner.bins().size() == 5, "5 classes");
  o.require(chi.p_value > 0.01, "chi-square at alpha 0.01");
  o.require(exact.class_probs.size() == 5 && worst <= 1e-12, "exact class probability 1/5");
}

void criterion2(Outcome& o) {
  int checked = 0;
  for (int n = 2; n <= 12; ++n) {
    const Rational target(1, (1 << n) - n);
    const bool ok = balanced_prob_labeled_exact(complete_state(n)) == target &&
                    balanced_prob_labeled_exact(empty_state(n)) == target;
    o.require(ok, "n=" + std::to_string(n));
    checked += ok;
  }
  o.detail << "exact identities hold for " << checked << "/11 vertex counts";
}

void criterion3(Outcome& o) {
  constexpr std::size_t kDraws = 1000000;
  for (int n = 3; n <= 4; ++n) {
    const auto e = enumerate_labeled(n);
    const auto index = index_states(e.labeled_states);
    const auto params = KahleParams::uniform(n);
    const auto balanced = exact_distribution([](const LabeledComplex& c) { return balanced_log_prob_labeled(c); }, e);
    const auto kahle = exact_distribution([&](const LabeledComplex& c) { return kahle_log_prob(c, params); }, e);

    std::vector<std::size_t> bc(e.labeled_count()), kc(e.labeled_count());
    Rng rng = make_stream(3000 + n);
    for (std::size_t i = 0; i < kDraws; ++i) {
      ++bc[index.at(balanced_sample(n, rng).state)];
      ++kc[index.at(kahle_sample(params, rng))];
    }
    const double bs = max_sigma(bc, balanced.state_probs, kDraws);
    const double ks = max_sigma(kc, kahle.state_probs, kDraws);
    o.detail << "n=" << n << ": balanced max " << bs << "sd, sum-1=" << balanced.total - 1 << "; kahle max " << ks
             << "sd, sum-1=" << kahle.total - 1 << ". ";
    o.require(bs <= 4.0, "balanced frequencies n=" + std::to_string(n));
    o.require(ks <= 4.0, "kahle frequencies n=" + std::to_string(n));
    o.require(std::abs(balanced.total - 1) <= 1e-12, "balanced normalization n=" + std::to_string(n));
    o.require(std::abs(kahle.total - 1) <= 1e-12, "kahle normalization n=" + std::to_string(n));
  }
}

void criterion4(Outcome& o) {
  const double lp = kahle_log_prob(complete_state(3), KahleParams::uniform(3));
  o.detail << "log P(C*_3)=" << lp << " vs log(1/16)=" << std::log(1.0 / 16);
  o.require(lp == std::log(1.0 / 16), "log(1/16) exactly");
  int holds = 0;
  for (int n = 3; n <= 20; ++n) {
    const bool ok = Rational(1, (1 << n) - n) > kahle_min_prob_exact(n);
    o.require(ok, "inequality n=" + std::to_string(n));
    holds += ok;
  }
  o.detail << "; inequality holds for " << holds << "/18 vertex counts";
}

void criterion5(Outcome& o) {
  Rational previous = 1;
  o.detail << "log10 ratio:";
  for (int n = 3; n <= 10; ++n) {
    const Rational ratio = balanced_min_prob_estimate_exact(n) / kahle_min_prob_exact(n);
    const double log_ratio = (balanced_min_log_prob_estimate(n) - kahle_min_log_prob(n)) / std::log(10.0);
    o.detail << " " << n << ":" << log_ratio;
    o.require(ratio > previous, "ratio > 1 and increasing at n=" + std::to_string(n));
    previous = ratio;
  }
}

void criterion6(Outcome& o) {
  const auto e = enumerate_labeled(3);
  const auto cfg = WalkConfig::make(3);
  const auto kernel = test::build_walk_kernel(e.labeled_states, cfg);
  const double row = test::max_row_sum_error(kernel);
  const bool irr = test::irreducible(kernel);
  const double stat = test::uniform_stationarity_error(kernel);

  constexpr std::size_t kSteps = 1000000;
  const auto index = index_states(e.labeled_states);
  std::vector<std::size_t> counts(e.labeled_count());
  Rng rng = make_stream(6000);
  LabeledComplex state = central_start(3);
  for (std::size_t i = 0; i < kSteps; ++i) {
    state = metropolis_step(state, cfg, rng).next;
    ++counts[index.at(state)];
  }
  const std::vector<double> uniform(e.labeled_count(), 1.0 / e.labeled_count());
  const double sigma = max_sigma(counts, uniform, kSteps);
  o.detail << "row err=" << row << " irreducible=" << irr << " stationarity err=" << stat
           << " (truncation correction on); chain max " << sigma << "sd";
  o.require(row <= 1e-12, "row-stochastic");
  o.require(irr, "irreducible");
  o.require(stat <= 1e-10, "uniform stationary");
  o.require(sigma <= 4.0, "chain law uniform");
}

void criterion7(Outcome& o) {
  constexpr int kRuns = 20;
  constexpr std::size_t kSteps = 5000;
  const auto cfg = WalkConfig::make(6);
  std::vector<double> central_cut, central_rej, corner_cut, central_traj;
  for (int run = 0; run < kRuns; ++run) {
    Rng rng = make_stream(7000 + run);
    const auto central = walk_trace(central_start(6), cfg, kSteps, rng);
    const auto r = analyze_trace(central, Observable::delta);
    central_cut.push_back(static_cast<double>(r.cutoff_lag));
    central_rej.push_back(r.rejection_rate);
    central_traj.push_back(static_cast<double>(analyze_trace(central, Observable::trajectory).cutoff_lag));

    Rng rng_corner = make_stream(7000 + run, 1);
    const auto corner = walk_trace(corner_start(6), cfg, kSteps, rng_corner);
    corner_cut.push_back(static_cast<double>(analyze_trace(corner, Observable::delta).cutoff_lag));
  }
  const double cut = median(central_cut);
  const double rej = median(central_rej);
  const double corner = median(corner_cut);
  o.detail << "central median cutoff=" << cut << " rejection=" << rej << "; corner median cutoff=" << corner
           << " (info: trajectory-observable central median cutoff=" << median(central_traj) << ")";
  o.require(cut >= 4 && cut <= 64, "central cutoff in [4, 64]");
  o.require(rej >= 0.35 && rej <= 0.65, "rejection rate in [0.35, 0.65]");
  o.require(corner <= 2 * cut, "corner cutoff at most twice central");
}

void criterion8(Outcome& o) {
  constexpr int kRuns = 10;
  std::vector<double> walk, balanced, kahle;
  for (int run = 0; run < kRuns; ++run) {
    const auto cmp = compare_samplers(6, 5000, 8000 + run);
    walk.push_back(static_cast<double>(cmp.walk.bins.bins().size()));
    balanced.push_back(static_cast<double>(cmp.balanced.bins.bins().size()));
    kahle.push_back(static_cast<double>(cmp.kahle.bins.bins().size()));
  }
  const double w = median(walk), b = median(balanced), k = median(kahle);

  Rng rng = make_stream(8100);
  GeometricBinner bal5, kah5;
  const auto params = KahleParams::uniform(5);
  for (int i = 0; i < 50000; ++i) {
    bal5.add(balanced_sample(5, rng).state);
    kah5.add(kahle_sample(params, rng));
  }
  const double bal_spread = residual_spread(multiplicity_residuals(bal5.multiplicities()));
  const double kah_spread = residual_spread(multiplicity_residuals(kah5.multiplicities()));
  o.detail << "C6 median unique classes walk=" << w << " balanced=" << b << " kahle=" << k
           << "; C5 residual spread balanced=" << bal_spread << " kahle=" << kah_spread;
  o.require(w >= b && b >= k, "walk >= balanced >= kahle");
  o.require(bal_spread < kah_spread, "balanced spread below kahle spread");
}

void criterion9(Outcome& o) {
  bool same = true;
  for (int n = 2; n <= 4; ++n) {
    auto dfs = enumerate_labeled(n).labeled_states;
    auto filtered = enumerate_by_filter(n);
    std::sort(dfs.begin(), dfs.end());
    std::sort(filtered.begin(), filtered.end());
    same = same && dfs == filtered;
  }
  const auto two = enumerate_labeled(2).labeled_count();
  const auto three = enumerate_labeled(3);
  o.detail << "dfs==filter(n<=4)=" << same << " labeled n=2:" << two << " n=3:" << three.labeled_count()
           << " geometric n=3:" << three.geometric_count();
  o.require(same, "dfs equals filter");
  o.require(two == 2 && three.labeled_count() == 9, "labeled counts");
  o.require(three.geometric_count() == 5, "geometric count");
}

struct Criterion {
  int id;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, 10, criterion1},  {2, 1, criterion2},   {3, 120, criterion3}, {4, 60, criterion4}, {5, 1, criterion5},
      {6, 120, criterion6}, {7, 300, criterion7}, {8, 600, criterion8}, {9, 30, criterion9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& ex) {
      o.require(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_seconds, "runtime budget " + std::to_string(static_cast<int>(c.budget_seconds)) + "s");
    failures += !o.pass;
    std::printf("%s criterion %d (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
