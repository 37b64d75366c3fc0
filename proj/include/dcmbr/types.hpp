#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcmbr {

using TokenId = std::int32_t;

// Token inventory with BOS/EOS markers. Index <-> string is a bijection.
class Vocab {
 public:
  Vocab(std::vector<std::string> tokens, TokenId bos_id, TokenId eos_id);

  int size() const { return static_cast<int>(tokens_.size()); }
  TokenId bos_id() const { return bos_id_; }
  TokenId eos_id() const { return eos_id_; }
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  // -1 if unknown.
  TokenId id_of(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  TokenId bos_id_;
  TokenId eos_id_;
};

// Target token sequence. `terminated` is set iff the last token is EOS.
// EOS appears at most once and only at the end.
struct Sequence {
  std::vector<TokenId> ids;
  bool terminated = false;

  std::size_t length() const { return ids.size(); }
  bool operator==(const Sequence& other) const { return ids == other.ids; }
  bool operator<(const Sequence& other) const { return ids < other.ids; }
};

Sequence make_sequence(std::vector<TokenId> ids, const Vocab& vocab);

// ids with a trailing EOS removed (utilities match on the surface tokens).
std::vector<TokenId> strip_eos(const std::vector<TokenId>& ids, TokenId eos_id);

// Normalized probability vector over the vocabulary.
class ProbDist {
 public:
  // Validates: entries >= 0, sum within 1e-12 of 1.
  explicit ProbDist(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  static ProbDist uniform(int n);
  static ProbDist one_hot(int index, int n);

  // Index of the largest entry, ties broken by the smallest index.
  int argmax() const;

 private:
  std::vector<double> probs_;
};

}  // namespace dcmbr
