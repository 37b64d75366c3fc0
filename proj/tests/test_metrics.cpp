#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dcmbr/errors.hpp"
#include "dcmbr/metrics.hpp"
#include "dcmbr/rng.hpp"
#include "dcmbr/sampling.hpp"
#include "dcmbr/types.hpp"

using namespace dcmbr;

namespace {

const Vocab& test_vocab() {
  static const Vocab v({"<s>", "</s>", "a", "b", "ab", "xy"}, 0, 1);
  return v;
}

Sequence seq_of(std::vector<TokenId> ids) {
  return make_sequence(std::move(ids), test_vocab());
}

PoolItem item_of(std::vector<TokenId> ids, int index) {
  return PoolItem{seq_of(std::move(ids)), index, 0.0};
}

}  // namespace

TEST_CASE("sentence BLEU: short-hypothesis worked example") {
  bool raw_zero = false;
  const double v =
      sentence_bleu_tokens({"a", "b", "c"}, {"a", "b", "c", "d", "e"}, 4, &raw_zero);
  // every realized order matches fully, so only the brevity penalty remains
  CHECK(std::abs(v - std::exp(-2.0 / 3.0)) < 1e-15);
  CHECK(raw_zero);  // the hypothesis has no 4-grams at all
}

TEST_CASE("identity scores 1 for every metric") {
  bool raw_zero = true;
  CHECK(sentence_bleu_tokens({"a", "b", "c", "d"}, {"a", "b", "c", "d"}, 4, &raw_zero) == 1.0);
  CHECK(!raw_zero);
  CHECK(chrf_strings("abcd", "abcd") == 1.0);
  CHECK(chrf_tokens({"ab", "cd"}, {"ab", "cd"}) == 1.0);
  CHECK(exact_match_tokens({"a", "b"}, {"a", "b"}));
}

TEST_CASE("empty-side conventions") {
  bool raw_zero = true;
  CHECK(sentence_bleu_tokens({}, {}, 4, &raw_zero) == 1.0);
  CHECK(!raw_zero);
  CHECK(sentence_bleu_tokens({}, {"a"}, 4, &raw_zero) == 0.0);
  CHECK(raw_zero);
  CHECK(sentence_bleu_tokens({"a"}, {}, 4, &raw_zero) == 0.0);
  CHECK(raw_zero);
  CHECK(chrf_strings("", "") == 1.0);
  CHECK(chrf_strings("a", "") == 0.0);
  CHECK(chrf_strings("", "a") == 0.0);
  CHECK(exact_match_tokens({}, {}));
  CHECK(!exact_match_tokens({"a"}, {}));
}

TEST_CASE("chrf: four-character worked example") {
  // orders 5 and 6 are absent from both strings and must be skipped, leaving
  // mean precision = mean recall = (3/4 + 2/3 + 1/2 + 0) / 4 = 23/48
  CHECK(std::abs(chrf_strings("abcd", "abce") - 23.0 / 48.0) < 1e-15);
  CHECK(chrf_strings("abcd", "wxyz") == 0.0);
}

TEST_CASE("chrf over tokens sees only the concatenated characters") {
  CHECK(chrf_tokens({"ab", "cd"}, {"abcd"}) == 1.0);
  CHECK(chrf_tokens({"a", "bcd"}, {"ab", "cd"}) == 1.0);
  CHECK(chrf_tokens({"ab"}, {"a", "b"}) == 1.0);
}

TEST_CASE("utility_score strips the trailing EOS before matching") {
  const Vocab& vocab = test_vocab();
  const Sequence with_eos = seq_of({2, 3, 1});
  Sequence bare;
  bare.ids = {2, 3};
  for (const char* name : {"bleu", "chrf", "exact_match"}) {
    const UtilityFn u = parse_utility(name);
    CHECK(utility_score(u, with_eos, bare, vocab) == 1.0);
    CHECK(utility_score(u, with_eos, with_eos, vocab) == 1.0);
  }
  // "ab" as one token vs "a","b" as two: chrf sees the same characters,
  // token-level metrics do not
  const Sequence glued = seq_of({4, 1});
  const Sequence split = seq_of({2, 3, 1});
  CHECK(utility_score(parse_utility("chrf"), glued, split, vocab) == 1.0);
  CHECK(utility_score(parse_utility("exact_match"), glued, split, vocab) == 0.0);
  CHECK(utility_score(parse_utility("bleu"), glued, split, vocab) < 1.0);
}

TEST_CASE("to_tokens / to_chars_string") {
  const Vocab& vocab = test_vocab();
  CHECK(to_tokens(seq_of({2, 4, 1}), vocab) == std::vector<std::string>{"a", "ab"});
  CHECK(to_chars_string(seq_of({2, 4, 1}), vocab) == "aab");
  CHECK(to_tokens(seq_of({1}), vocab).empty());
}

TEST_CASE("parse_utility accepts aliases; unknown names are rejected") {
  CHECK(parse_utility("bleu").kind == UtilityKind::kSentenceBleu);
  CHECK(parse_utility("sentence_bleu").kind == UtilityKind::kSentenceBleu);
  CHECK(parse_utility("chrf").kind == UtilityKind::kChrf);
  CHECK(parse_utility("exact").kind == UtilityKind::kExactMatch);
  CHECK(parse_utility("exact_match").kind == UtilityKind::kExactMatch);
  CHECK_THROWS_AS(parse_utility("rouge"), ConfigError);
  CHECK_THROWS_AS(parse_utility(""), ConfigError);

  CHECK(parse_utility(utility_name(parse_utility("bleu"))).kind == UtilityKind::kSentenceBleu);
  CHECK(parse_utility(utility_name(parse_utility("chrf"))).kind == UtilityKind::kChrf);
  CHECK(parse_utility(utility_name(parse_utility("exact"))).kind == UtilityKind::kExactMatch);
}

TEST_CASE("diversity: self-pairs count unless excluded") {
  const Vocab& vocab = test_vocab();
  CandidatePool singleton{{item_of({2, 1}, 0)}, 1.0, 0};
  CHECK(diversity(singleton, vocab) == 1.0);
  CHECK(diversity(singleton, vocab, true) == 1.0);

  CandidatePool identical{{item_of({2, 3, 1}, 0), item_of({2, 3, 1}, 1), item_of({2, 3, 1}, 2)},
                          1.0,
                          0};
  CHECK(std::abs(diversity(identical, vocab) - 1.0) < 1e-15);
  CHECK(std::abs(diversity(identical, vocab, true) - 1.0) < 1e-15);

  // two distinct members; the metric is recall-weighted, so both ordered
  // directions contribute and they need not be equal
  CandidatePool pair{{item_of({2, 3, 1}, 0), item_of({2, 5, 1}, 1)}, 1.0, 0};
  const double c_ab = chrf_strings("ab", "axy");
  const double c_ba = chrf_strings("axy", "ab");
  CHECK(c_ab > 0.0);
  CHECK(c_ba > 0.0);
  CHECK(c_ab != c_ba);
  CHECK(std::abs(diversity(pair, vocab) - (1.0 + c_ab + c_ba + 1.0) / 4.0) < 1e-15);
  CHECK(std::abs(diversity(pair, vocab, true) - (c_ab + c_ba) / 2.0) < 1e-15);

  CandidatePool empty{{}, 1.0, 0};
  CHECK_THROWS_AS(diversity(empty, vocab), ConfigError);
}

TEST_CASE("corpus_quality is the mean sentence score; lengths must align") {
  const Vocab& vocab = test_vocab();
  const std::vector<Sequence> hyps{seq_of({2, 3, 1}), seq_of({2, 1})};
  const std::vector<Sequence> golds{seq_of({2, 3, 1}), seq_of({3, 1})};
  const UtilityFn u = parse_utility("exact_match");
  CHECK(corpus_quality(hyps, golds, u, vocab) == 0.5);

  const UtilityFn c = parse_utility("chrf");
  const double expect =
      0.5 * (chrf_strings("ab", "ab") + chrf_strings("a", "b"));
  CHECK(std::abs(corpus_quality(hyps, golds, c, vocab) - expect) < 1e-15);

  const std::vector<Sequence> short_golds{seq_of({2, 1})};
  CHECK_THROWS_AS(corpus_quality(hyps, short_golds, u, vocab), ConfigError);
  CHECK_THROWS_AS(corpus_quality({}, {}, u, vocab), ConfigError);
}

TEST_CASE("bleu and chrf agree with brute-force oracles on random pairs") {
  const std::vector<std::string> alphabet{"a", "b", "ab", "ba", "xy", "x"};
  SplitMix64 rng(20240817);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> hyp, ref;
    const int hn = static_cast<int>(next_below(rng, 9));
    const int rn = static_cast<int>(next_below(rng, 9));
    for (int i = 0; i < hn; ++i) hyp.push_back(alphabet[next_below(rng, alphabet.size())]);
    for (int i = 0; i < rn; ++i) ref.push_back(alphabet[next_below(rng, alphabet.size())]);

    CHECK(std::abs(sentence_bleu_tokens(hyp, ref) - oracles::bleu(hyp, ref)) < 1e-12);
    CHECK(std::abs(chrf_tokens(hyp, ref) -
                   oracles::chrf(oracles::concat(hyp), oracles::concat(ref))) < 1e-12);
  }
}
