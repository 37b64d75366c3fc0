#include "dcmbr/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "dcmbr/errors.hpp"

namespace dcmbr {

Vocab::Vocab(std::vector<std::string> tokens, TokenId bos_id, TokenId eos_id)
    : tokens_(std::move(tokens)), bos_id_(bos_id), eos_id_(eos_id) {
  if (tokens_.size() < 2) throw ConfigError("vocab needs at least 2 tokens");
  std::unordered_set<std::string> seen;
  for (const auto& t : tokens_) {
    if (t.empty()) throw ConfigError("vocab token must be non-empty");
    if (!seen.insert(t).second) throw ConfigError("duplicate vocab token: " + t);
  }
  const int n = size();
  if (bos_id_ < 0 || bos_id_ >= n) throw ConfigError("bos_id out of range");
  if (eos_id_ < 0 || eos_id_ >= n) throw ConfigError("eos_id out of range");
  if (bos_id_ == eos_id_) throw ConfigError("bos_id and eos_id must differ");
}

const std::string& Vocab::token(TokenId id) const {
  if (id < 0 || id >= size()) throw ConfigError("token id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

TokenId Vocab::id_of(const std::string& token) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == token) return static_cast<TokenId>(i);
  }
  return -1;
}

Sequence make_sequence(std::vector<TokenId> ids, const Vocab& vocab) {
  const int n = vocab.size();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (id < 0 || id >= n) throw ConfigError("sequence token id out of range");
    if (id == vocab.eos_id() && i + 1 != ids.size()) {
      throw ConfigError("eos may only appear as the final token");
    }
  }
  Sequence seq;
  seq.terminated = !ids.empty() && ids.back() == vocab.eos_id();
  seq.ids = std::move(ids);
  return seq;
}

std::vector<TokenId> strip_eos(const std::vector<TokenId>& ids, TokenId eos_id) {
  if (!ids.empty() && ids.back() == eos_id) {
    return std::vector<TokenId>(ids.begin(), ids.end() - 1);
  }
  return ids;
}

ProbDist::ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ConfigError("probability vector must be non-empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ConfigError("probability entries must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("probability vector must sum to 1");
  }
}

ProbDist ProbDist::uniform(int n) {
  if (n < 1) throw ConfigError("uniform distribution needs n >= 1");
  return ProbDist(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

ProbDist ProbDist::one_hot(int index, int n) {
  if (n < 1 || index < 0 || index >= n) throw ConfigError("one_hot index out of range");
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  p[static_cast<std::size_t>(index)] = 1.0;
  return ProbDist(std::move(p));
}

int ProbDist::argmax() const {
  int best = 0;
  for (int i = 1; i < size(); ++i) {
    if (probs_[static_cast<std::size_t>(i)] > probs_[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace dcmbr
