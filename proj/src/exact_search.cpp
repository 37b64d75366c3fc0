#include "dcmbr/exact_search.hpp"

#include <algorithm>
#include <cmath>

#include "dcmbr/errors.hpp"

namespace dcmbr {

namespace {

struct Candidate {
  std::vector<TokenId> ids;
  double logprob;
  double prob;
};

// prob descending, ties toward the lexicographically smaller sequence.
bool better(const Candidate& a, const Candidate& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  return a.ids < b.ids;
}

class TopNSearch {
 public:
  TopNSearch(const ConditionalLM& model, int source_idx, int n, int max_len,
             std::uint64_t budget, bool prune)
      : model_(model),
        source_idx_(source_idx),
        n_(static_cast<std::size_t>(n)),
        max_len_(max_len),
        budget_(budget),
        prune_(prune),
        eos_(model.vocab().eos_id()) {}

  TopNResult run() {
    std::vector<TokenId> prefix;
    dfs(prefix, 0.0, 1.0);
    // heap -> sorted entries, best first; final order uses the reported
    // product probabilities so the emitted column is non-increasing even
    // where log-sum and product rounding disagree in the last ulp
    std::sort(heap_.begin(), heap_.end(), [](const Candidate& a, const Candidate& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.ids < b.ids;
    });
    TopNResult result;
    result.n_requested = static_cast<int>(n_);
    result.fewer_than_requested = heap_.size() < n_;
    result.nodes_visited = nodes_;
    result.entries.reserve(heap_.size());
    for (Candidate& c : heap_) {
      Sequence seq;
      seq.terminated = true;
      seq.ids = std::move(c.ids);
      result.entries.push_back(TopNEntry{std::move(seq), c.prob});
    }
    return result;
  }

 private:
  void offer(Candidate&& c) {
    if (heap_.size() < n_) {
      heap_.push_back(std::move(c));
      std::push_heap(heap_.begin(), heap_.end(), better);  // front = worst kept
      return;
    }
    if (better(c, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), better);
      heap_.back() = std::move(c);
      std::push_heap(heap_.begin(), heap_.end(), better);
    }
  }

  // True when no completion of a prefix at `logprob` can still enter the
  // heap: extensions never gain probability, so a strictly smaller logprob is
  // hopeless, while an equal one may still win its tie lexicographically.
  bool hopeless(double logprob) const {
    return prune_ && heap_.size() == n_ && logprob < heap_.front().logprob;
  }

  void dfs(std::vector<TokenId>& prefix, double logprob, double prob) {
    if (++nodes_ > budget_) {
      throw BudgetError("exact search exceeded the node budget of " + std::to_string(budget_) +
                        " prefix expansions");
    }
    if (static_cast<int>(prefix.size()) >= max_len_) return;
    const ProbDist dist = model_.next_dist(source_idx_, prefix, 1.0);
    // children in descending probability (ties by token index) so good
    // completions fill the heap early
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(dist.size()));
    for (int i = 0; i < dist.size(); ++i) {
      if (dist[i] > 0.0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&dist](int a, int b) { return dist[a] > dist[b]; });
    for (const int tok : order) {
      const double child_lp = logprob + std::log(dist[tok]);
      const double child_prob = prob * dist[tok];
      if (tok == eos_) {
        Candidate c;
        c.ids = prefix;
        c.ids.push_back(static_cast<TokenId>(tok));
        c.logprob = child_lp;
        c.prob = child_prob;
        offer(std::move(c));
      } else {
        if (hopeless(child_lp)) continue;
        prefix.push_back(static_cast<TokenId>(tok));
        dfs(prefix, child_lp, child_prob);
        prefix.pop_back();
      }
    }
  }

  const ConditionalLM& model_;
  int source_idx_;
  std::size_t n_;
  int max_len_;
  std::uint64_t budget_;
  bool prune_;
  TokenId eos_;
  std::vector<Candidate> heap_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

TopNResult exact_topn(const ConditionalLM& model, int source_idx, int n, int max_len,
                      std::uint64_t node_budget, bool prune) {
  if (n < 1) throw ConfigError("exact_topn: n must be >= 1");
  if (max_len < 1) throw ConfigError("exact_topn: max_len must be >= 1");
  return TopNSearch(model, source_idx, n, max_len, node_budget, prune).run();
}

namespace {

void enumerate_dfs(const ConditionalLM& model, int source_idx, int max_len,
                   std::uint64_t budget, std::vector<TokenId>& prefix, double prob,
                   std::uint64_t& nodes, std::vector<EnumEntry>& out) {
  if (++nodes > budget) {
    throw BudgetError("enumeration exceeded the node budget of " + std::to_string(budget) +
                      " prefix expansions");
  }
  if (static_cast<int>(prefix.size()) >= max_len) return;
  const ProbDist dist = model.next_dist(source_idx, prefix, 1.0);
  const TokenId eos = model.vocab().eos_id();
  for (int tok = 0; tok < dist.size(); ++tok) {
    if (dist[tok] <= 0.0) continue;
    const double child_prob = prob * dist[tok];
    if (tok == eos) {
      Sequence seq;
      seq.terminated = true;
      seq.ids = prefix;
      seq.ids.push_back(static_cast<TokenId>(tok));
      out.push_back(EnumEntry{std::move(seq), child_prob});
    } else {
      prefix.push_back(static_cast<TokenId>(tok));
      enumerate_dfs(model, source_idx, max_len, budget, prefix, child_prob, nodes, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

std::vector<EnumEntry> enumerate_terminated(const ConditionalLM& model, int source_idx,
                                            int max_len, std::uint64_t node_budget) {
  if (max_len < 1) throw ConfigError("enumerate_terminated: max_len must be >= 1");
  std::vector<EnumEntry> out;
  std::vector<TokenId> prefix;
  std::uint64_t nodes = 0;
  enumerate_dfs(model, source_idx, max_len, node_budget, prefix, 1.0, nodes, out);
  std::sort(out.begin(), out.end(),
            [](const EnumEntry& a, const EnumEntry& b) { return a.seq.ids < b.seq.ids; });
  return out;
}

}  // namespace dcmbr
