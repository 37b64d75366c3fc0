#pragma once

#include <cstdint>
#include <vector>

#include "dcmbr/exact_search.hpp"
#include "dcmbr/metrics.hpp"
#include "dcmbr/model.hpp"
#include "dcmbr/sampling.hpp"

namespace dcmbr {

struct MbrConfig {
  int n_hyp = 10;
  int n_ref = 10;
  double t_hyp = 1.0;
  double t_ref = 1.0;
  UtilityFn utility;
  std::uint64_t seed = 0;
  // One pool serves both roles; legal only when t_hyp=t_ref and n_hyp=n_ref.
  bool share_pools = false;
};

// Throws ConfigError before any sampling happens.
void validate_config(const MbrConfig& cfg);

struct MbrDecision {
  Sequence chosen;
  int chosen_index;  // sample index in the hypothesis pool
  double mu_hat;
  std::vector<double> score_table;  // expected utility per hypothesis, index order
  long long utility_calls;          // always n_hyp * n_ref
};

// Arithmetic mean of u(h, r) over the reference items in sample-index order
// (fixed summation order); a hypothesis that also occurs among the references
// contributes u(h,h) -- there is no self-exclusion.
double expected_utility(const Sequence& h, const CandidatePool& refs, const UtilityFn& u,
                        const Vocab& vocab);

// Sampling-based decision rule: hypothesis pool at (t_hyp, derive_seed(seed,0)),
// reference pool at (t_ref, derive_seed(seed,1)) unless share_pools reuses the
// hypothesis pool; picks the expected-utility argmax, ties toward the lowest
// sample index. t_hyp=t_ref=1 with share_pools is the plain sampling-based
// decision rule; cooled temperatures (< 1) sharpen the pools.
MbrDecision mbr_decode(const ConditionalLM& model, int source_idx, const MbrConfig& cfg);

struct ExactMbrResult {
  Sequence chosen;
  double mu;
  std::size_t space_size;  // number of terminated sequences enumerated
};

// Exact expectation over the enumerable sequence space: mu(h) = sum_r P(r)
// u(h,r) with both roles drawn from the full enumeration; argmax ties break
// toward the lexicographically smaller sequence. BudgetError when the space
// exceeds the node budget.
ExactMbrResult exact_mbr(const ConditionalLM& model, int source_idx, const UtilityFn& u,
                         int max_len, std::uint64_t node_budget = kDefaultNodeBudget);

// mu(h) for one externally chosen hypothesis against the same enumeration.
double exact_expected_utility(const ConditionalLM& model, int source_idx, const Sequence& h,
                              const UtilityFn& u, int max_len,
                              std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace dcmbr
