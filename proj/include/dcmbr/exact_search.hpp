#pragma once

#include <cstdint>
#include <vector>

#include "dcmbr/model.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

// Cap on prefix expansions for the exhaustive searches; exceeding it raises
// BudgetError rather than hanging on an intractable space.
inline constexpr std::uint64_t kDefaultNodeBudget = 5'000'000;

struct TopNEntry {
  Sequence seq;
  double prob;  // left-to-right product of model conditionals
};

struct TopNResult {
  std::vector<TopNEntry> entries;  // descending prob; ties lexicographic ascending
  int n_requested;
  bool fewer_than_requested;  // the space holds fewer terminated sequences than n
  std::uint64_t nodes_visited;
};

// The exact n highest-probability terminated sequences: depth-first expansion
// with a min-heap of the best n complete sequences. A prefix is pruned only
// when its log-probability is strictly below the heap minimum (an equal
// prefix may still complete into a lexicographically better sequence);
// comparisons happen in log space, reported probabilities are the exact
// left-to-right products. `prune=false` exists to cross-check soundness.
TopNResult exact_topn(const ConditionalLM& model, int source_idx, int n, int max_len,
                      std::uint64_t node_budget = kDefaultNodeBudget, bool prune = true);

struct EnumEntry {
  Sequence seq;
  double prob;
};

// Every terminated sequence with positive probability, in lexicographic token
// order, with exact product probabilities.
std::vector<EnumEntry> enumerate_terminated(const ConditionalLM& model, int source_idx,
                                            int max_len,
                                            std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace dcmbr
