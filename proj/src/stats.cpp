#include "dcmbr/stats.hpp"

#include <cmath>

#include "dcmbr/errors.hpp"
#include "dcmbr/rng.hpp"

namespace dcmbr {

double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ConfigError("kendall_tau: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw ConfigError("kendall_tau: need at least 2 points");
  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;
  long long ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / denom;
}

BootstrapResult paired_bootstrap_scores(const std::vector<double>& scores_a,
                                        const std::vector<double>& scores_b, int resamples,
                                        std::uint64_t seed) {
  if (scores_a.size() != scores_b.size()) {
    throw ConfigError("paired_bootstrap: score lists differ in length");
  }
  const std::size_t n = scores_a.size();
  if (n == 0) throw ConfigError("paired_bootstrap: empty score lists");
  if (resamples < 100) throw ConfigError("paired_bootstrap: resamples must be >= 100");

  double full_a = 0.0;
  double full_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    full_a += scores_a[i];
    full_b += scores_b[i];
  }
  full_a /= static_cast<double>(n);
  full_b /= static_cast<double>(n);

  SplitMix64 rng(seed);
  double b_wins = 0.0;
  for (int r = 0; r < resamples; ++r) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(next_below(rng, n));
      sum_a += scores_a[idx];
      sum_b += scores_b[idx];
    }
    if (sum_b > sum_a) {
      b_wins += 1.0;
    } else if (sum_b == sum_a) {
      b_wins += 0.5;  // exact ties split so the two sides stay symmetric
    }
  }
  BootstrapResult result;
  result.p_b_better = b_wins / static_cast<double>(resamples);
  result.p_a_better = 1.0 - result.p_b_better;
  result.corpus_a = full_a;
  result.corpus_b = full_b;
  result.resamples = resamples;
  return result;
}

BootstrapResult paired_bootstrap(const std::vector<Sequence>& hyps_a,
                                 const std::vector<Sequence>& hyps_b,
                                 const std::vector<Sequence>& golds, const UtilityFn& metric,
                                 const Vocab& vocab, int resamples, std::uint64_t seed) {
  if (hyps_a.size() != golds.size() || hyps_b.size() != golds.size()) {
    throw ConfigError("paired_bootstrap: hypothesis and gold lists differ in length");
  }
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  scores_a.reserve(golds.size());
  scores_b.reserve(golds.size());
  for (std::size_t i = 0; i < golds.size(); ++i) {
    scores_a.push_back(utility_score(metric, hyps_a[i], golds[i], vocab));
    scores_b.push_back(utility_score(metric, hyps_b[i], golds[i], vocab));
  }
  return paired_bootstrap_scores(scores_a, scores_b, resamples, seed);
}

}  // namespace dcmbr
