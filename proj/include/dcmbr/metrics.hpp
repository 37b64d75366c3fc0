#pragma once

#include <string>
#include <vector>

#include "dcmbr/sampling.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

// All metrics score in [0,1] with u(h,h)=1 for non-empty h; the EOS marker is
// stripped before matching, and two empty surfaces compare as 1.

// Sentence BLEU over whitespace tokens: geometric mean of modified n-gram
// precisions (orders 1..max_order) times the brevity penalty. Orders with
// zero matches (including orders longer than the hypothesis) use add-one
// smoothing: (m+1)/(t+1). raw_zero, when given, reports that some order
// matched nothing, i.e. the score sits on the smoothing floor.
double sentence_bleu_tokens(const std::vector<std::string>& hyp,
                            const std::vector<std::string>& ref, int max_order = 4,
                            bool* raw_zero = nullptr);

// ChrF over the concatenation of the tokens (tokens are joined with single
// spaces and whitespace is then removed, so the separator never matches):
// macro-averaged character n-gram precision and recall for orders 1..char_order
// -- orders absent from both strings are skipped -- combined as F_beta.
double chrf_strings(const std::string& hyp, const std::string& ref, int char_order = 6,
                    double beta = 2.0);
double chrf_tokens(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                   int char_order = 6, double beta = 2.0);

bool exact_match_tokens(const std::vector<std::string>& hyp,
                        const std::vector<std::string>& ref);

enum class UtilityKind { kSentenceBleu, kChrf, kExactMatch };

struct UtilityFn {
  UtilityKind kind = UtilityKind::kChrf;
  int bleu_max_order = 4;
  int chrf_char_order = 6;
  double chrf_beta = 2.0;
};

// Accepts "bleu"/"sentence_bleu", "chrf", "exact"/"exact_match".
UtilityFn parse_utility(const std::string& name);
std::string utility_name(const UtilityFn& u);

// Token strings of a sequence with the trailing EOS removed.
std::vector<std::string> to_tokens(const Sequence& seq, const Vocab& vocab);
// The character string ChrF sees (tokens concatenated, EOS stripped).
std::string to_chars_string(const Sequence& seq, const Vocab& vocab);

double utility_score(const UtilityFn& u, const Sequence& h, const Sequence& r,
                     const Vocab& vocab);

// Mean pairwise ChrF over the pool, self-pairs included:
//   (1/K^2) sum_a sum_b chrf(a, b)
// Higher = the candidates look more alike (less diverse). exclude_self drops
// the a=b pairs and renormalizes by K(K-1); a singleton pool scores 1 either
// way.
double diversity(const CandidatePool& pool, const Vocab& vocab, bool exclude_self = false);

// Mean sentence-level metric against the aligned gold references.
double corpus_quality(const std::vector<Sequence>& hyps, const std::vector<Sequence>& golds,
                      const UtilityFn& metric, const Vocab& vocab);

}  // namespace dcmbr
