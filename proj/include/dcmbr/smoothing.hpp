#pragma once

#include "dcmbr/types.hpp"

namespace dcmbr {

// Closed-form optimum of training with label smoothing: 1-lambda at the gold
// index, lambda/(|V|-1) everywhere else. Requires 0 <= lambda < 1.
ProbDist optimal_smoothed(int gold_idx, double lambda, int vocab_size);

// Smoothing transform for arbitrary (possibly stochastic) targets:
//   out_i = (1 - lambda*|V|/(|V|-1)) * p_i + lambda/(|V|-1)
// computed as (1-lambda)*p_i + (lambda/(|V|-1))*(1-p_i), which is the same
// mixture but exact on one-hot input. Reduces to optimal_smoothed when p is
// one-hot; lambda=0 is the identity. Requires 0 <= lambda <= 1.
ProbDist smooth_mixture(const ProbDist& dist, double lambda);

// Temperature transform: entry_i = p_i^(1/T) / sum_j p_j^(1/T), done in log
// space (zeros stay zero). Equals softmax(o/T) for any logits o representing
// dist. T=1 returns the input unchanged. Requires T > 0.
ProbDist apply_temperature(const ProbDist& dist, double t);

// The temperature that maps the smoothed optimum at lambda1 onto the one at
// lambda2 (same gold index, same vocabulary):
//   T = ln[(1-lambda1)(|V|-1)/lambda1] / ln[(1-lambda2)(|V|-1)/lambda2]
// The (|V|-1) factors inside both logs are required for the round trip to be
// exact: the gold/non-gold probability ratio of the smoothed optimum is
// (1-lambda)(|V|-1)/lambda. Requires 0 < lambda < 1 on both sides and
// lambda != (|V|-1)/|V| (the uniform point has no logit gap). A negative
// return value means the two factors sit on opposite sides of the uniform
// point; no positive temperature connects them.
double equivalence_temperature(double lambda1, double lambda2, int vocab_size);

// Comparison-only variant without the (|V|-1) factors:
//   T = ln[(1-lambda1)/lambda1] / ln[(1-lambda2)/lambda2]
// Kept so the round-trip failure of this form is demonstrable; do not use it
// to transform distributions. Requires 0 < lambda < 1 and lambda2 != 0.5.
double equivalence_temperature_uncorrected(double lambda1, double lambda2);

// Inverse direction: the smoothing factor whose optimum equals the lambda1
// optimum after temperature T. With r = ((1-lambda1)(|V|-1)/lambda1)^(1/T),
// returns lambda2 = (|V|-1)/(|V|-1+r). Round-trips with
// equivalence_temperature. Requires T > 0 and lambda1 in the same domain as
// above.
double effective_smoothing(double lambda1, double t, int vocab_size);

// Cross-entropy of prediction p against the smoothed target at gold_idx:
// -sum_i Q_i ln p_i with Q = optimal_smoothed(gold_idx, lambda, |p|).
// Returns +infinity when p is zero at a positive-target index.
double label_smoothed_ce(const ProbDist& p, int gold_idx, double lambda);

}  // namespace dcmbr
