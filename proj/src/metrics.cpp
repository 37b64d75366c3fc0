#include "dcmbr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dcmbr/errors.hpp"

namespace dcmbr {

namespace {

// token n-grams keyed as unit-separator-joined strings
std::unordered_map<std::string, int> token_ngrams(const std::vector<std::string>& tokens,
                                                  int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      key += tokens[i + static_cast<std::size_t>(k)];
      key += '\x1f';
    }
    ++counts[key];
  }
  return counts;
}

std::unordered_map<std::string, int> char_ngrams(const std::string& s, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, static_cast<std::size_t>(n))];
  return counts;
}

int overlap(const std::unordered_map<std::string, int>& a,
            const std::unordered_map<std::string, int>& b) {
  int m = 0;
  for (const auto& [key, count] : a) {
    const auto it = b.find(key);
    if (it != b.end()) m += std::min(count, it->second);
  }
  return m;
}

}  // namespace

double sentence_bleu_tokens(const std::vector<std::string>& hyp,
                            const std::vector<std::string>& ref, int max_order,
                            bool* raw_zero) {
  if (max_order < 1) throw ConfigError("sentence_bleu: max_order must be >= 1");
  if (raw_zero) *raw_zero = false;
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) {
    if (raw_zero) *raw_zero = true;
    return 0.0;
  }
  double log_prec_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    const auto h = token_ngrams(hyp, n);
    const auto r = token_ngrams(ref, n);
    long long total = 0;
    for (const auto& [key, count] : h) total += count;
    const long long matched = overlap(h, r);
    double prec;
    if (matched == 0) {
      if (raw_zero) *raw_zero = true;
      prec = 1.0 / static_cast<double>(total + 1);  // add-one smoothing
    } else {
      prec = static_cast<double>(matched) / static_cast<double>(total);
    }
    log_prec_sum += std::log(prec);
  }
  const double geo_mean = std::exp(log_prec_sum / max_order);
  const double bp =
      hyp.size() >= ref.size()
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size()));
  return geo_mean * bp;
}

double chrf_strings(const std::string& hyp, const std::string& ref, int char_order,
                    double beta) {
  if (char_order < 1) throw ConfigError("chrf: char_order must be >= 1");
  if (!(beta > 0.0)) throw ConfigError("chrf: beta must be > 0");
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;
  double prec_sum = 0.0;
  double rec_sum = 0.0;
  int orders_used = 0;
  for (int n = 1; n <= char_order; ++n) {
    const auto h = char_ngrams(hyp, n);
    const auto r = char_ngrams(ref, n);
    long long h_total = 0;
    long long r_total = 0;
    for (const auto& [key, count] : h) h_total += count;
    for (const auto& [key, count] : r) r_total += count;
    if (h_total == 0 && r_total == 0) continue;  // order longer than both strings
    const long long matched = overlap(h, r);
    prec_sum += h_total > 0 ? static_cast<double>(matched) / static_cast<double>(h_total) : 0.0;
    rec_sum += r_total > 0 ? static_cast<double>(matched) / static_cast<double>(r_total) : 0.0;
    ++orders_used;
  }
  if (orders_used == 0) return 0.0;
  const double prec = prec_sum / orders_used;
  const double rec = rec_sum / orders_used;
  const double denom = beta * beta * prec + rec;
  if (denom == 0.0) return 0.0;
  return (1.0 + beta * beta) * prec * rec / denom;
}

double chrf_tokens(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                   int char_order, double beta) {
  std::string h;
  for (const auto& t : hyp) h += t;
  std::string r;
  for (const auto& t : ref) r += t;
  return chrf_strings(h, r, char_order, beta);
}

bool exact_match_tokens(const std::vector<std::string>& hyp,
                        const std::vector<std::string>& ref) {
  return hyp == ref;
}

UtilityFn parse_utility(const std::string& name) {
  UtilityFn u;
  if (name == "bleu" || name == "sentence_bleu") {
    u.kind = UtilityKind::kSentenceBleu;
  } else if (name == "chrf") {
    u.kind = UtilityKind::kChrf;
  } else if (name == "exact" || name == "exact_match") {
    u.kind = UtilityKind::kExactMatch;
  } else {
    throw ConfigError("unknown utility/metric '" + name +
                      "' (expected bleu, chrf, or exact_match)");
  }
  return u;
}

std::string utility_name(const UtilityFn& u) {
  switch (u.kind) {
    case UtilityKind::kSentenceBleu:
      return "bleu";
    case UtilityKind::kChrf:
      return "chrf";
    case UtilityKind::kExactMatch:
      return "exact_match";
  }
  return "unknown";
}

std::vector<std::string> to_tokens(const Sequence& seq, const Vocab& vocab) {
  std::vector<std::string> tokens;
  const auto ids = strip_eos(seq.ids, vocab.eos_id());
  tokens.reserve(ids.size());
  for (const TokenId id : ids) tokens.push_back(vocab.token(id));
  return tokens;
}

std::string to_chars_string(const Sequence& seq, const Vocab& vocab) {
  std::string s;
  for (const TokenId id : strip_eos(seq.ids, vocab.eos_id())) s += vocab.token(id);
  return s;
}

namespace {

// surface equality without the strip_eos copies; hot inside the N^2 loops
bool surface_equal(const std::vector<TokenId>& a, const std::vector<TokenId>& b, TokenId eos) {
  std::size_t na = a.size();
  if (na > 0 && a[na - 1] == eos) --na;
  std::size_t nb = b.size();
  if (nb > 0 && b[nb - 1] == eos) --nb;
  if (na != nb) return false;
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

double utility_score(const UtilityFn& u, const Sequence& h, const Sequence& r,
                     const Vocab& vocab) {
  switch (u.kind) {
    case UtilityKind::kExactMatch:
      return surface_equal(h.ids, r.ids, vocab.eos_id()) ? 1.0 : 0.0;
    case UtilityKind::kSentenceBleu:
      return sentence_bleu_tokens(to_tokens(h, vocab), to_tokens(r, vocab), u.bleu_max_order);
    case UtilityKind::kChrf:
      return chrf_strings(to_chars_string(h, vocab), to_chars_string(r, vocab),
                          u.chrf_char_order, u.chrf_beta);
  }
  throw ConfigError("unknown utility kind");
}

double diversity(const CandidatePool& pool, const Vocab& vocab, bool exclude_self) {
  const std::size_t k = pool.items.size();
  if (k == 0) throw ConfigError("diversity: pool must be non-empty");
  if (k == 1) return 1.0;
  std::vector<std::string> strings;
  strings.reserve(k);
  for (const PoolItem& item : pool.items) strings.push_back(to_chars_string(item.seq, vocab));
  double sum = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (exclude_self && a == b) continue;
      sum += chrf_strings(strings[a], strings[b]);
    }
  }
  const double pairs = exclude_self ? static_cast<double>(k) * static_cast<double>(k - 1)
                                    : static_cast<double>(k) * static_cast<double>(k);
  return sum / pairs;
}

double corpus_quality(const std::vector<Sequence>& hyps, const std::vector<Sequence>& golds,
                      const UtilityFn& metric, const Vocab& vocab) {
  if (hyps.size() != golds.size()) {
    throw ConfigError("corpus_quality: hypothesis and gold lists differ in length");
  }
  if (hyps.empty()) throw ConfigError("corpus_quality: empty lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    sum += utility_score(metric, hyps[i], golds[i], vocab);
  }
  return sum / static_cast<double>(hyps.size());
}

}  // namespace dcmbr
