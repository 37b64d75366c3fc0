#pragma once

#include <cstdint>
#include <vector>

#include "dcmbr/task.hpp"

namespace dcmbr {

inline constexpr std::uint64_t kDefaultTaskSeed = 4242;

// Seeded toy translation task. Each source gets a gold chain of distinct
// content tokens ending in EOS; with probability `noise` a step jumps forward
// over at least one chain token (or straight to EOS) instead of emitting the
// gold token. Every walk therefore terminates within max_len and the
// positive-probability sequence space stays small enough for the exact
// searches. Requires order >= 1 (conditionals are keyed by the previous
// token), vocab_size >= 5, max_len >= 5, noise in [0, 1).
TaskSpec gen_synthetic_task(int vocab_size, int order, int max_len, double noise,
                            std::uint64_t seed, int num_sources = 20);

// The task every experiment and check defaults to:
// |V|=12, order 1, max_len 12, noise 0.1, 20 sources, fixed seed.
TaskSpec default_task();

struct CollapseRow {
  double lambda;
  int length;
  double prob;  // (1 - lambda)^length
};

// Sequence-probability collapse arithmetic: the gold probability a smoothed
// deterministic model assigns to an L-step gold target.
std::vector<CollapseRow> collapse_table(const std::vector<double>& lambdas,
                                        const std::vector<int>& lengths);

}  // namespace dcmbr
