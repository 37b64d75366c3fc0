#pragma once

#include <cstdint>
#include <vector>

#include "dcmbr/metrics.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

// Tie-corrected (tau-b) rank correlation:
//   tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2))
// with n0 = n(n-1)/2 and n1/n2 the tied-pair counts in xs/ys. Returns 0 when
// either vector is constant. Inputs must have equal length >= 2.
double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys);

struct BootstrapResult {
  double p_a_better;  // fraction of resamples where A's corpus score wins
  double p_b_better;  // symmetric: p_a_better + p_b_better = 1
  double corpus_a;    // full-set corpus scores
  double corpus_b;
  int resamples;
};

// Paired bootstrap over per-sentence scores: each resample redraws sentence
// indices with replacement and compares corpus means; exact ties split 0.5
// to each side. Requires resamples >= 100.
BootstrapResult paired_bootstrap_scores(const std::vector<double>& scores_a,
                                        const std::vector<double>& scores_b, int resamples,
                                        std::uint64_t seed);

// Convenience wrapper computing per-sentence scores with `metric` first.
BootstrapResult paired_bootstrap(const std::vector<Sequence>& hyps_a,
                                 const std::vector<Sequence>& hyps_b,
                                 const std::vector<Sequence>& golds, const UtilityFn& metric,
                                 const Vocab& vocab, int resamples, std::uint64_t seed);

}  // namespace dcmbr
