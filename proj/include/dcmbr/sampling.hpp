#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcmbr/model.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

struct PoolItem {
  Sequence seq;
  int sample_index;
  double logprob;  // at the sampling temperature, over realized steps
};

// Multiset of sampled candidates. Items are stored in sample_index order
// (0..N-1) no matter how sampling was scheduled; duplicates are retained.
struct CandidatePool {
  std::vector<PoolItem> items;
  double temperature;
  std::uint64_t seed;
};

// One draw: each token sampled from next_dist(source, prefix, T) with a
// SplitMix64 stream seeded by `seed`; stops at EOS or max_len (the cap marks
// the sequence unterminated). Deterministic in (model, source, T, seed).
Sequence ancestral_sample(const ConditionalLM& model, int source_idx, double t,
                          std::uint64_t seed, int max_len);

// N independent draws; draw i uses the sub-stream derive_seed(seed, i), so
// the pool is identical at any worker count. Uses the task's max_len.
CandidatePool sample_pool(const ConditionalLM& model, int source_idx, double t, int n,
                          std::uint64_t seed);

// One candidate per line: {"index", "token_ids", "tokens", "logprob",
// "terminated"}.
std::string pool_to_jsonl(const CandidatePool& pool, const Vocab& vocab);

}  // namespace dcmbr
