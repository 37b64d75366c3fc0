#include "dcmbr/mbr.hpp"

#include "dcmbr/errors.hpp"
#include "dcmbr/rng.hpp"

namespace dcmbr {

void validate_config(const MbrConfig& cfg) {
  if (cfg.n_hyp < 1 || cfg.n_ref < 1) throw ConfigError("mbr: pool sizes must be >= 1");
  if (!(cfg.t_hyp > 0.0) || !(cfg.t_ref > 0.0)) {
    throw ConfigError("mbr: temperatures must be > 0");
  }
  if (cfg.share_pools && (cfg.t_hyp != cfg.t_ref || cfg.n_hyp != cfg.n_ref)) {
    throw ConfigError("mbr: share_pools requires t_hyp = t_ref and n_hyp = n_ref");
  }
}

double expected_utility(const Sequence& h, const CandidatePool& refs, const UtilityFn& u,
                        const Vocab& vocab) {
  if (refs.items.empty()) throw ConfigError("expected_utility: empty reference pool");
  double sum = 0.0;
  for (const PoolItem& r : refs.items) {
    sum += utility_score(u, h, r.seq, vocab);
  }
  return sum / static_cast<double>(refs.items.size());
}

MbrDecision mbr_decode(const ConditionalLM& model, int source_idx, const MbrConfig& cfg) {
  validate_config(cfg);
  const Vocab& vocab = model.vocab();
  const CandidatePool hyps =
      sample_pool(model, source_idx, cfg.t_hyp, cfg.n_hyp, derive_seed(cfg.seed, 0));
  const CandidatePool refs =
      cfg.share_pools
          ? hyps
          : sample_pool(model, source_idx, cfg.t_ref, cfg.n_ref, derive_seed(cfg.seed, 1));

  MbrDecision decision;
  decision.score_table.reserve(hyps.items.size());
  decision.utility_calls = 0;
  int best = 0;
  for (std::size_t i = 0; i < hyps.items.size(); ++i) {
    const double mu = expected_utility(hyps.items[i].seq, refs, cfg.utility, vocab);
    decision.utility_calls += static_cast<long long>(refs.items.size());
    decision.score_table.push_back(mu);
    if (mu > decision.score_table[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  decision.chosen = hyps.items[static_cast<std::size_t>(best)].seq;
  decision.chosen_index = best;
  decision.mu_hat = decision.score_table[static_cast<std::size_t>(best)];
  return decision;
}

namespace {

std::vector<EnumEntry> enumerate_space(const ConditionalLM& model, int source_idx, int max_len,
                                       std::uint64_t node_budget) {
  auto space = enumerate_terminated(model, source_idx, max_len, node_budget);
  if (space.empty()) throw ConfigError("exact decision rule: no terminated sequences exist");
  return space;  // lexicographic order, so the first argmax is the tie winner
}

}  // namespace

ExactMbrResult exact_mbr(const ConditionalLM& model, int source_idx, const UtilityFn& u,
                         int max_len, std::uint64_t node_budget) {
  const auto space = enumerate_space(model, source_idx, max_len, node_budget);
  const Vocab& vocab = model.vocab();
  ExactMbrResult result;
  result.space_size = space.size();
  double best_mu = -1.0;
  std::size_t best = 0;
  for (std::size_t h = 0; h < space.size(); ++h) {
    double mu = 0.0;
    for (const EnumEntry& r : space) {
      mu += r.prob * utility_score(u, space[h].seq, r.seq, vocab);
    }
    if (mu > best_mu) {
      best_mu = mu;
      best = h;
    }
  }
  result.chosen = space[best].seq;
  result.mu = best_mu;
  return result;
}

double exact_expected_utility(const ConditionalLM& model, int source_idx, const Sequence& h,
                              const UtilityFn& u, int max_len, std::uint64_t node_budget) {
  const auto space = enumerate_space(model, source_idx, max_len, node_budget);
  const Vocab& vocab = model.vocab();
  double mu = 0.0;
  for (const EnumEntry& r : space) {
    mu += r.prob * utility_score(u, h, r.seq, vocab);
  }
  return mu;
}

}  // namespace dcmbr
