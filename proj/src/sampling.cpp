#include "dcmbr/sampling.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dcmbr/errors.hpp"
#include "dcmbr/rng.hpp"

namespace dcmbr {

namespace {

// CDF inversion; the last positive entry absorbs the tail lost to rounding.
int draw_index(const ProbDist& dist, double u) {
  double cum = 0.0;
  int last_positive = -1;
  for (int i = 0; i < dist.size(); ++i) {
    const double p = dist[i];
    if (p <= 0.0) continue;
    last_positive = i;
    cum += p;
    if (u < cum) return i;
  }
  return last_positive;
}

Sequence sample_one(const ConditionalLM& model, int source_idx, double t, SplitMix64& rng,
                    int max_len, double* logprob) {
  std::vector<TokenId> ids;
  double lp = 0.0;
  const TokenId eos = model.vocab().eos_id();
  while (static_cast<int>(ids.size()) < max_len) {
    const ProbDist dist = model.next_dist(source_idx, ids, t);
    const int tok = draw_index(dist, rng.next_unit());
    lp += std::log(dist[tok]);
    ids.push_back(static_cast<TokenId>(tok));
    if (tok == eos) break;
  }
  if (logprob) *logprob = lp;
  Sequence seq;
  seq.terminated = !ids.empty() && ids.back() == eos;
  seq.ids = std::move(ids);
  return seq;
}

}  // namespace

Sequence ancestral_sample(const ConditionalLM& model, int source_idx, double t,
                          std::uint64_t seed, int max_len) {
  if (!(t > 0.0)) throw ConfigError("ancestral_sample: T must be > 0");
  if (max_len < 1) throw ConfigError("ancestral_sample: max_len must be >= 1");
  SplitMix64 rng(seed);
  return sample_one(model, source_idx, t, rng, max_len, nullptr);
}

CandidatePool sample_pool(const ConditionalLM& model, int source_idx, double t, int n,
                          std::uint64_t seed) {
  if (!(t > 0.0)) throw ConfigError("sample_pool: T must be > 0");
  if (n < 1) throw ConfigError("sample_pool: N must be >= 1");
  CandidatePool pool{{}, t, seed};
  pool.items.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    double lp = 0.0;
    Sequence seq = sample_one(model, source_idx, t, rng, model.max_len(), &lp);
    pool.items.push_back(PoolItem{std::move(seq), i, lp});
  }
  return pool;
}

std::string pool_to_jsonl(const CandidatePool& pool, const Vocab& vocab) {
  std::ostringstream out;
  for (const PoolItem& item : pool.items) {
    nlohmann::json j;
    j["index"] = item.sample_index;
    j["token_ids"] = item.seq.ids;
    std::string text;
    for (const TokenId id : item.seq.ids) {
      if (id == vocab.eos_id()) continue;
      if (!text.empty()) text += ' ';
      text += vocab.token(id);
    }
    j["tokens"] = text;
    j["logprob"] = item.logprob;
    j["terminated"] = item.seq.terminated;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace dcmbr
