#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "dcmbr/errors.hpp"
#include "dcmbr/mbr.hpp"
#include "dcmbr/metrics.hpp"
#include "dcmbr/model.hpp"
#include "dcmbr/sampling.hpp"
#include "dcmbr/synthetic.hpp"
#include "dcmbr/task.hpp"
#include "dcmbr/types.hpp"

using namespace dcmbr;

namespace {

MbrConfig base_config() {
  MbrConfig cfg;
  cfg.utility = parse_utility("chrf");
  cfg.seed = 7;
  return cfg;
}

// first step a (0.6) or EOS (0.4); a always ends -> space {[a,eos],[eos]}
TaskSpec two_answer_task() {
  Vocab vocab({"<s>", "</s>", "a"}, 0, 1);
  std::unordered_map<std::string, ProbDist> table;
  table.emplace("", ProbDist({0.0, 0.4, 0.6}));
  table.emplace("2", ProbDist::one_hot(1, 3));
  std::vector<Sequence> sources{make_sequence({2}, vocab)};
  std::vector<std::vector<Sequence>> refs{{make_sequence({2, 1}, vocab)}};
  TaskSpec task{std::move(vocab), 1,  4, std::move(sources), std::move(refs),
                {std::move(table)}, ProbDist::uniform(3), ""};
  validate_task(task);
  return task;
}

}  // namespace

TEST_CASE("validate_config rejects bad pools before sampling") {
  MbrConfig cfg = base_config();
  CHECK_NOTHROW(validate_config(cfg));

  cfg.n_hyp = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = base_config();
  cfg.n_ref = -1;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = base_config();
  cfg.t_hyp = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = base_config();
  cfg.t_ref = -0.5;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = base_config();
  cfg.share_pools = true;
  cfg.t_hyp = 0.5;  // t_ref still 1.0
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = base_config();
  cfg.share_pools = true;
  cfg.n_ref = cfg.n_hyp + 1;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = base_config();
  cfg.share_pools = true;
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("utility_calls is exactly the pool product") {
  const ConditionalLM model(default_task(), 0.1);
  MbrConfig cfg = base_config();
  cfg.share_pools = true;
  const MbrDecision d10 = mbr_decode(model, 0, cfg);
  CHECK(d10.utility_calls == 100);
  CHECK(d10.score_table.size() == 10);

  cfg = base_config();
  cfg.n_hyp = 3;
  cfg.n_ref = 7;
  const MbrDecision d21 = mbr_decode(model, 1, cfg);
  CHECK(d21.utility_calls == 21);
  CHECK(d21.score_table.size() == 3);
}

TEST_CASE("mbr_decode is deterministic in (model, source, config)") {
  const ConditionalLM model(default_task(), 0.2);
  MbrConfig cfg = base_config();
  cfg.n_hyp = 8;
  cfg.n_ref = 8;
  const MbrDecision a = mbr_decode(model, 3, cfg);
  const MbrDecision b = mbr_decode(model, 3, cfg);
  CHECK(a.chosen.ids == b.chosen.ids);
  CHECK(a.chosen_index == b.chosen_index);
  CHECK(a.mu_hat == b.mu_hat);
  CHECK(a.score_table == b.score_table);

  cfg.seed = 8;
  const MbrDecision c = mbr_decode(model, 3, cfg);
  CHECK((a.chosen.ids != c.chosen.ids || a.score_table != c.score_table));
}

TEST_CASE("mbr_decode matches a straight-line re-implementation bit for bit") {
  const TaskSpec task = default_task();
  int checked_shared = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const double lambda = (trial % 4) * 0.1;
    const ConditionalLM model(task, lambda);
    MbrConfig cfg;
    cfg.n_hyp = 2 + static_cast<int>(trial % 7);
    cfg.n_ref = 2 + static_cast<int>((trial * 3) % 9);
    cfg.t_hyp = 0.5 + 0.1 * static_cast<double>(trial % 6);
    cfg.t_ref = 0.4 + 0.2 * static_cast<double>(trial % 4);
    cfg.utility = parse_utility(trial % 2 == 0 ? "chrf" : "bleu");
    cfg.seed = 1000 + trial;
    if (trial % 5 == 0) {
      cfg.share_pools = true;
      cfg.n_ref = cfg.n_hyp;
      cfg.t_ref = cfg.t_hyp;
      ++checked_shared;
    }
    const int src = static_cast<int>(trial % 20);

    const MbrDecision got = mbr_decode(model, src, cfg);
    const MbrDecision want = oracles::mbr(model, src, cfg);
    CHECK(got.chosen_index == want.chosen_index);
    CHECK(got.chosen.ids == want.chosen.ids);
    CHECK(got.mu_hat == want.mu_hat);          // bitwise: same summation order
    CHECK(got.score_table == want.score_table);
    CHECK(got.utility_calls == want.utility_calls);
  }
  CHECK(checked_shared == 10);
}

TEST_CASE("expected_utility averages in sample-index order; ties go to the first index") {
  const TaskSpec task = two_answer_task();
  const ConditionalLM model(task, 0.0);
  const Vocab& vocab = model.vocab();

  CandidatePool refs;
  refs.temperature = 1.0;
  refs.seed = 0;
  refs.items.push_back({make_sequence({2, 1}, vocab), 0, 0.0});
  refs.items.push_back({make_sequence({1}, vocab), 1, 0.0});
  refs.items.push_back({make_sequence({2, 1}, vocab), 2, 0.0});

  const UtilityFn exact = parse_utility("exact_match");
  CHECK(std::abs(expected_utility(make_sequence({2, 1}, vocab), refs, exact, vocab) -
                 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(expected_utility(make_sequence({1}, vocab), refs, exact, vocab) - 1.0 / 3.0) <
        1e-15);

  CandidatePool empty{{}, 1.0, 0};
  CHECK_THROWS_AS(expected_utility(make_sequence({1}, vocab), empty, exact, vocab),
                  ConfigError);

  // noise-free task: one gold walk per source, so every draw is identical,
  // the score table is all-tied, and the strict argmax keeps index 0
  const ConditionalLM deterministic(gen_synthetic_task(12, 1, 12, 0.0, 5, 20), 0.0);
  MbrConfig cfg = base_config();
  cfg.share_pools = true;
  const MbrDecision d = mbr_decode(deterministic, 5, cfg);
  CHECK(d.chosen_index == 0);
  CHECK(d.mu_hat == 1.0);
}

TEST_CASE("exact_mbr: closed-form two-sequence space") {
  const ConditionalLM model(two_answer_task(), 0.0);
  const UtilityFn exact = parse_utility("exact_match");
  const ExactMbrResult r = exact_mbr(model, 0, exact, 4);
  CHECK(r.space_size == 2);
  // mu([a,eos]) = 0.6, mu([eos]) = 0.4
  CHECK(r.chosen.ids == std::vector<TokenId>{2, 1});
  CHECK(std::abs(r.mu - 0.6) < 1e-15);

  CHECK(std::abs(exact_expected_utility(model, 0, r.chosen, exact, 4) - r.mu) < 1e-15);
  Sequence empty_answer = make_sequence({1}, model.vocab());
  CHECK(std::abs(exact_expected_utility(model, 0, empty_answer, exact, 4) - 0.4) < 1e-15);
}

TEST_CASE("exact_mbr breaks mu ties toward the lexicographically smaller sequence") {
  Vocab vocab({"<s>", "</s>", "a", "b"}, 0, 1);
  std::unordered_map<std::string, ProbDist> table;
  table.emplace("", ProbDist({0.0, 0.0, 0.5, 0.5}));
  table.emplace("2", ProbDist::one_hot(1, 4));
  table.emplace("3", ProbDist::one_hot(1, 4));
  std::vector<Sequence> sources{make_sequence({2}, vocab)};
  std::vector<std::vector<Sequence>> refs{{make_sequence({2, 1}, vocab)}};
  TaskSpec task{std::move(vocab), 1,  4, std::move(sources), std::move(refs),
                {std::move(table)}, ProbDist::uniform(4), ""};
  validate_task(task);

  const ConditionalLM model(task, 0.0);
  const ExactMbrResult r = exact_mbr(model, 0, parse_utility("exact_match"), 4);
  CHECK(r.space_size == 2);
  CHECK(r.chosen.ids == std::vector<TokenId>{2, 1});  // mu = 0.5 both ways
  CHECK(std::abs(r.mu - 0.5) < 1e-15);
}

TEST_CASE("sampling agrees with the exact rule when the model is deterministic") {
  const TaskSpec task = default_task();
  const ConditionalLM model(task, 0.0);
  const UtilityFn u = parse_utility("exact_match");
  for (int src : {0, 7, 13}) {
    const ExactMbrResult exact = exact_mbr(model, src, u, task.max_len);
    MbrConfig cfg = base_config();
    cfg.utility = u;
    cfg.n_hyp = 200;
    cfg.n_ref = 200;
    cfg.share_pools = true;
    const MbrDecision sampled = mbr_decode(model, src, cfg);
    CHECK(sampled.chosen.ids == exact.chosen.ids);
  }
}

TEST_CASE("exact_mbr surfaces the enumeration budget") {
  const TaskSpec task = default_task();
  const ConditionalLM model(task, 0.3);
  CHECK_THROWS_AS(exact_mbr(model, 0, parse_utility("chrf"), task.max_len, 100), BudgetError);
}
