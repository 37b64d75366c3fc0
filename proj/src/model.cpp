#include "dcmbr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcmbr/errors.hpp"
#include "dcmbr/smoothing.hpp"

namespace dcmbr {

namespace {

void check_lambda(double lambda, int vocab_size) {
  const double uniform_point = static_cast<double>(vocab_size - 1) / vocab_size;
  if (!(lambda >= 0.0) || lambda > uniform_point) {
    throw ConfigError("model lambda must lie in [0, (|V|-1)/|V|]");
  }
}

}  // namespace

ConditionalLM::ConditionalLM(TaskSpec task, double lambda)
    : task_(std::make_shared<const TaskSpec>(std::move(task))), lambda_(lambda) {
  validate_task(*task_);
  check_lambda(lambda_, task_->vocab.size());
}

ConditionalLM::ConditionalLM(std::shared_ptr<const TaskSpec> task, double lambda)
    : task_(std::move(task)), lambda_(lambda) {
  if (!task_) throw ConfigError("model needs a task");
  check_lambda(lambda_, task_->vocab.size());
}

ProbDist ConditionalLM::next_dist(int source_idx, const std::vector<TokenId>& prefix,
                                  double t) const {
  if (!(t > 0.0)) throw ConfigError("next_dist: T must be > 0");
  const ProbDist& base = task_conditional(*task_, source_idx, prefix);
  if (lambda_ == 0.0) return apply_temperature(base, t);
  return apply_temperature(smooth_mixture(base, lambda_), t);
}

double ConditionalLM::seq_logprob(int source_idx, const Sequence& target, double t,
                                  bool* exact_zero) const {
  if (static_cast<int>(target.length()) > task_->max_len) {
    throw ConfigError("seq_logprob: target exceeds max_len");
  }
  if (exact_zero) *exact_zero = false;
  double lp = 0.0;
  std::vector<TokenId> prefix;
  prefix.reserve(target.ids.size());
  for (const TokenId id : target.ids) {
    const ProbDist dist = next_dist(source_idx, prefix, t);
    const double p = dist[id];
    if (p == 0.0) {
      if (exact_zero) *exact_zero = true;
      return -std::numeric_limits<double>::infinity();
    }
    lp += std::log(p);
    prefix.push_back(id);
  }
  return lp;
}

ConditionalLM build_from_spec(TaskSpec task, double lambda) {
  return ConditionalLM(std::move(task), lambda);
}

ConditionalLM build_from_corpus(const std::vector<std::pair<Sequence, Sequence>>& corpus,
                                int order, double lambda, const Vocab& vocab) {
  return ConditionalLM(task_from_corpus(corpus, order, vocab), lambda);
}

double token_entropy(const ProbDist& dist) {
  double h = 0.0;
  for (int i = 0; i < dist.size(); ++i) {
    const double p = dist[i];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<EvalPair> task_eval_set(const TaskSpec& task) {
  std::vector<EvalPair> pairs;
  for (std::size_t s = 0; s < task.sources.size(); ++s) {
    for (const Sequence& ref : task.gold_references[s]) {
      pairs.emplace_back(static_cast<int>(s), ref);
    }
  }
  return pairs;
}

double mean_teacher_forcing_entropy(const ConditionalLM& model,
                                    const std::vector<EvalPair>& eval_set, double t) {
  if (eval_set.empty()) throw ConfigError("eval set must be non-empty");
  double total = 0.0;
  long long steps = 0;
  for (const auto& [src, gold] : eval_set) {
    std::vector<TokenId> prefix;
    prefix.reserve(gold.ids.size());
    for (const TokenId id : gold.ids) {
      total += token_entropy(model.next_dist(src, prefix, t));
      ++steps;
      prefix.push_back(id);
    }
  }
  return total / static_cast<double>(steps);
}

int gold_rank(const ProbDist& dist, TokenId gold) {
  if (gold < 0 || gold >= dist.size()) throw ConfigError("gold_rank: token out of range");
  const double pg = dist[gold];
  int rank = 0;
  for (int i = 0; i < dist.size(); ++i) {
    if (dist[i] > pg || (dist[i] == pg && i < gold)) ++rank;
  }
  return rank;
}

std::vector<long long> gold_rank_histogram(const ConditionalLM& model,
                                           const std::vector<EvalPair>& eval_set,
                                           const std::vector<int>& bucket_edges) {
  if (bucket_edges.size() < 2) throw ConfigError("need at least two bucket edges");
  for (std::size_t i = 1; i < bucket_edges.size(); ++i) {
    if (bucket_edges[i] <= bucket_edges[i - 1]) {
      throw ConfigError("bucket edges must be strictly increasing");
    }
  }
  if (bucket_edges.front() != 0 || bucket_edges.back() < model.vocab_size()) {
    throw ConfigError("bucket edges must cover [0, |V|)");
  }
  std::vector<long long> counts(bucket_edges.size() - 1, 0);
  for (const auto& [src, gold] : eval_set) {
    std::vector<TokenId> prefix;
    prefix.reserve(gold.ids.size());
    for (const TokenId id : gold.ids) {
      const int rank = gold_rank(model.next_dist(src, prefix, 1.0), id);
      const auto it = std::upper_bound(bucket_edges.begin(), bucket_edges.end(), rank);
      counts[static_cast<std::size_t>(it - bucket_edges.begin()) - 1] += 1;
      prefix.push_back(id);
    }
  }
  return counts;
}

}  // namespace dcmbr
