#pragma once

// Test-side reference implementations, kept deliberately naive and structured
// differently from the library: plain maps, brute-force enumeration, no
// pruning, no shared helpers. When these agree with the fast paths, both are
// probably right.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcmbr/mbr.hpp"
#include "dcmbr/model.hpp"
#include "dcmbr/rng.hpp"
#include "dcmbr/sampling.hpp"
#include "dcmbr/task.hpp"
#include "dcmbr/types.hpp"

namespace oracles {

// ---- n-gram metrics ----------------------------------------------------

inline std::map<std::vector<std::string>, long long> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, long long> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i) + n)] += 1;
  }
  return counts;
}

inline double bleu(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                   int max_order = 4) {
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    const auto hc = ngram_counts(hyp, n);
    const auto rc = ngram_counts(ref, n);
    long long total = 0;
    long long matched = 0;
    for (const auto& [gram, count] : hc) {
      total += count;
      const auto it = rc.find(gram);
      if (it != rc.end()) matched += std::min(count, it->second);
    }
    const double prec =
        matched > 0 ? static_cast<double>(matched) / static_cast<double>(total)
                    : (static_cast<double>(matched) + 1.0) / (static_cast<double>(total) + 1.0);
    log_sum += std::log(prec);
  }
  const double bp =
      hyp.size() >= ref.size()
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size()));
  return bp * std::exp(log_sum / max_order);
}

inline std::map<std::string, long long> substr_counts(const std::string& s, int n) {
  std::map<std::string, long long> counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
    counts[s.substr(i, static_cast<std::size_t>(n))] += 1;
  }
  return counts;
}

inline double chrf(const std::string& hyp, const std::string& ref, int char_order = 6,
                   double beta = 2.0) {
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;
  double prec_sum = 0.0;
  double rec_sum = 0.0;
  int used = 0;
  for (int n = 1; n <= char_order; ++n) {
    const auto hc = substr_counts(hyp, n);
    const auto rc = substr_counts(ref, n);
    long long h_total = 0;
    long long r_total = 0;
    long long matched = 0;
    for (const auto& [gram, count] : hc) h_total += count;
    for (const auto& [gram, count] : rc) r_total += count;
    for (const auto& [gram, count] : hc) {
      const auto it = rc.find(gram);
      if (it != rc.end()) matched += std::min(count, it->second);
    }
    if (h_total == 0 && r_total == 0) continue;
    ++used;
    if (h_total > 0) prec_sum += static_cast<double>(matched) / static_cast<double>(h_total);
    if (r_total > 0) rec_sum += static_cast<double>(matched) / static_cast<double>(r_total);
  }
  if (used == 0) return 0.0;
  const double p = prec_sum / used;
  const double r = rec_sum / used;
  const double denom = beta * beta * p + r;
  return denom == 0.0 ? 0.0 : (1.0 + beta * beta) * p * r / denom;
}

inline std::string concat(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

// ---- rank correlation ----------------------------------------------------

inline double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;
  long long ties_y = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
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
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / denom;
}

// ---- random draws ----------------------------------------------------

// flat Dirichlet via normalized exponentials; every entry strictly positive
inline std::vector<double> dirichlet(dcmbr::SplitMix64& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(rng.next_unit_pos());
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

// ---- dense random task (every non-BOS token possible at every step) ------

inline dcmbr::TaskSpec dense_task(std::uint64_t seed, int vocab_size, int max_len) {
  using namespace dcmbr;
  std::vector<std::string> names{"<s>", "</s>"};
  for (int i = 2; i < vocab_size; ++i) names.push_back(std::string(1, static_cast<char>('a' + i - 2)));
  Vocab vocab(std::move(names), 0, 1);

  SplitMix64 rng(seed);
  auto random_row = [&]() {
    std::vector<double> probs(static_cast<std::size_t>(vocab_size), 0.0);
    double sum = 0.0;
    for (int i = 1; i < vocab_size; ++i) {  // BOS is never generated
      probs[static_cast<std::size_t>(i)] = -std::log(rng.next_unit_pos());
      sum += probs[static_cast<std::size_t>(i)];
    }
    for (double& p : probs) p /= sum;
    return ProbDist(std::move(probs));
  };

  std::unordered_map<std::string, ProbDist> table;
  table.emplace("", random_row());
  for (int t = 2; t < vocab_size; ++t) table.emplace(std::to_string(t), random_row());

  std::vector<Sequence> sources{make_sequence({2}, vocab)};
  std::vector<std::vector<Sequence>> refs{{make_sequence({2, 1}, vocab)}};
  TaskSpec task{std::move(vocab),
                1,
                max_len,
                std::move(sources),
                std::move(refs),
                {std::move(table)},
                ProbDist::uniform(vocab_size),
                ""};
  validate_task(task);
  return task;
}

// ---- brute-force sequence enumeration ----------------------------------

struct EnumeratedSeq {
  std::vector<dcmbr::TokenId> ids;  // ends with EOS
  double prob;
};

// every terminated sequence with positive probability, by trying every token
// tuple of every length; probabilities are left-to-right products
inline std::vector<EnumeratedSeq> enumerate_all(const dcmbr::ConditionalLM& model,
                                                int source_idx, int max_len) {
  using namespace dcmbr;
  const int v = model.vocab_size();
  const TokenId eos = model.vocab().eos_id();
  std::vector<EnumeratedSeq> out;
  for (int len = 1; len <= max_len; ++len) {
    // odometer over v^(len-1) interior tuples; the last token is EOS
    std::vector<TokenId> interior(static_cast<std::size_t>(len - 1), 0);
    for (;;) {
      bool interior_eos = false;
      for (const TokenId id : interior) {
        if (id == eos) interior_eos = true;
      }
      if (!interior_eos) {
        std::vector<TokenId> ids = interior;
        ids.push_back(eos);
        double prob = 1.0;
        std::vector<TokenId> prefix;
        for (const TokenId id : ids) {
          prob *= model.next_dist(source_idx, prefix, 1.0)[id];
          if (prob == 0.0) break;
          prefix.push_back(id);
        }
        if (prob > 0.0) out.push_back(EnumeratedSeq{std::move(ids), prob});
      }
      // advance the odometer
      std::size_t pos = 0;
      while (pos < interior.size()) {
        if (++interior[pos] < v) break;
        interior[pos] = 0;
        ++pos;
      }
      if (pos == interior.size()) break;  // full wrap: every tuple visited
    }
  }
  std::sort(out.begin(), out.end(), [](const EnumeratedSeq& a, const EnumeratedSeq& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.ids < b.ids;
  });
  return out;
}

// ---- straight-line sampling-based decision rule -------------------------

inline dcmbr::MbrDecision mbr(const dcmbr::ConditionalLM& model, int source_idx,
                              const dcmbr::MbrConfig& cfg) {
  using namespace dcmbr;
  const CandidatePool hyps =
      sample_pool(model, source_idx, cfg.t_hyp, cfg.n_hyp, derive_seed(cfg.seed, 0));
  const CandidatePool refs =
      cfg.share_pools
          ? hyps
          : sample_pool(model, source_idx, cfg.t_ref, cfg.n_ref, derive_seed(cfg.seed, 1));
  MbrDecision d;
  d.utility_calls = 0;
  for (std::size_t i = 0; i < hyps.items.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < refs.items.size(); ++j) {
      sum += utility_score(cfg.utility, hyps.items[i].seq, refs.items[j].seq, model.vocab());
      d.utility_calls += 1;
    }
    d.score_table.push_back(sum / static_cast<double>(refs.items.size()));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < hyps.items.size(); ++i) {
    if (d.score_table[i] > d.score_table[best]) best = i;
  }
  d.chosen = hyps.items[best].seq;
  d.chosen_index = static_cast<int>(best);
  d.mu_hat = d.score_table[best];
  return d;
}

}  // namespace oracles
