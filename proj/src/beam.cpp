#include "dcmbr/beam.hpp"

#include <algorithm>
#include <cmath>

#include "dcmbr/errors.hpp"

namespace dcmbr {

namespace {

struct Hyp {
  std::vector<TokenId> ids;
  double logprob;
};

// logprob descending, then token sequence ascending.
bool better(const Hyp& a, const Hyp& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  return a.ids < b.ids;
}

double score_of(const Hyp& h, bool length_normalize) {
  if (!length_normalize) return h.logprob;
  return h.logprob / static_cast<double>(std::max<std::size_t>(h.ids.size(), 1));
}

}  // namespace

BeamResult beam_search_scored(const ConditionalLM& model, int source_idx, int beam_width,
                              int max_len, bool length_normalize) {
  if (beam_width < 1) throw ConfigError("beam_search: beam_width must be >= 1");
  if (max_len < 1) throw ConfigError("beam_search: max_len must be >= 1");
  const TokenId eos = model.vocab().eos_id();

  std::vector<Hyp> alive{Hyp{{}, 0.0}};
  std::vector<Hyp> finished;

  for (int step = 0; step < max_len && !alive.empty(); ++step) {
    std::vector<Hyp> expansions;
    expansions.reserve(alive.size() * static_cast<std::size_t>(model.vocab_size()));
    for (const Hyp& h : alive) {
      const ProbDist dist = model.next_dist(source_idx, h.ids, 1.0);
      for (int tok = 0; tok < dist.size(); ++tok) {
        if (dist[tok] <= 0.0) continue;
        Hyp child{h.ids, h.logprob + std::log(dist[tok])};
        child.ids.push_back(static_cast<TokenId>(tok));
        if (tok == eos) {
          finished.push_back(std::move(child));
        } else {
          expansions.push_back(std::move(child));
        }
      }
    }
    std::sort(expansions.begin(), expansions.end(), better);
    if (static_cast<int>(expansions.size()) > beam_width) {
      expansions.resize(static_cast<std::size_t>(beam_width));
    }
    alive = std::move(expansions);
  }

  const std::vector<Hyp>& candidates = finished.empty() ? alive : finished;
  if (candidates.empty()) throw ConfigError("beam_search: no candidates at all");
  const Hyp* best = &candidates.front();
  for (const Hyp& h : candidates) {
    const double s = score_of(h, length_normalize);
    const double bs = score_of(*best, length_normalize);
    if (s > bs || (s == bs && h.ids < best->ids)) best = &h;
  }

  BeamResult result;
  result.seq.terminated = !best->ids.empty() && best->ids.back() == eos;
  result.seq.ids = best->ids;
  result.logprob = best->logprob;
  return result;
}

Sequence beam_search(const ConditionalLM& model, int source_idx, int beam_width, int max_len,
                     bool length_normalize) {
  return beam_search_scored(model, source_idx, beam_width, max_len, length_normalize).seq;
}

}  // namespace dcmbr
