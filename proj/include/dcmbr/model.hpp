#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dcmbr/task.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

// Tabular autoregressive model: the lambda-smoothed transform of a task's
// conditionals. For deterministic task conditionals the gold token gets
// exactly 1-lambda and every other token exactly lambda/(|V|-1). Immutable;
// safe for concurrent reads.
class ConditionalLM {
 public:
  // lambda in [0, (|V|-1)/|V|]; the right edge gives uniform conditionals.
  ConditionalLM(TaskSpec task, double lambda);
  ConditionalLM(std::shared_ptr<const TaskSpec> task, double lambda);

  const TaskSpec& task() const { return *task_; }
  const std::shared_ptr<const TaskSpec>& task_ptr() const { return task_; }
  double lambda() const { return lambda_; }
  int vocab_size() const { return task_->vocab.size(); }
  const Vocab& vocab() const { return task_->vocab; }
  int max_len() const { return task_->max_len; }
  int num_sources() const { return static_cast<int>(task_->sources.size()); }

  // Smoothed conditional at (source, target prefix), then temperature T.
  // T=1 returns the smoothed conditional unchanged.
  ProbDist next_dist(int source_idx, const std::vector<TokenId>& prefix, double t) const;

  // Sum of log conditionals at the realized tokens (EOS step included when
  // present). Unterminated sequences get the log-probability of their
  // realized prefix. Returns -infinity only when some step has exactly zero
  // probability -- log-space summation cannot underflow to -infinity -- and
  // sets *exact_zero when provided.
  double seq_logprob(int source_idx, const Sequence& target, double t,
                     bool* exact_zero = nullptr) const;

 private:
  std::shared_ptr<const TaskSpec> task_;
  double lambda_;
};

// The smoothing-optimum construction: conditionals are
// smooth_mixture(task conditional, lambda); lambda=0 is the task itself.
ConditionalLM build_from_spec(TaskSpec task, double lambda);

// Relative-frequency estimation over order-k contexts, then the lambda
// transform on query; unseen contexts back off to uniform.
ConditionalLM build_from_corpus(const std::vector<std::pair<Sequence, Sequence>>& corpus,
                                int order, double lambda, const Vocab& vocab);

// Shannon entropy -sum p ln p in nats, with 0 ln 0 := 0.
double token_entropy(const ProbDist& dist);

// (source index, gold target) pairs for teacher-forcing diagnostics.
using EvalPair = std::pair<int, Sequence>;
std::vector<EvalPair> task_eval_set(const TaskSpec& task);

// Mean token entropy of next_dist at temperature T over all gold prefixes.
double mean_teacher_forcing_entropy(const ConditionalLM& model,
                                    const std::vector<EvalPair>& eval_set, double t);

// 0-based rank of `gold` in the descending-sorted dist; equal probabilities
// are ordered by ascending token index.
int gold_rank(const ProbDist& dist, TokenId gold);

// Teacher-forcing ranks of every gold token, bucketed. Edges must be strictly
// increasing, start at 0, and reach at least |V|; bucket i covers
// [edges[i], edges[i+1]).
std::vector<long long> gold_rank_histogram(const ConditionalLM& model,
                                           const std::vector<EvalPair>& eval_set,
                                           const std::vector<int>& bucket_edges);

}  // namespace dcmbr
