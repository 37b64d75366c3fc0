#include "dcmbr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <nlohmann/json.hpp>

#include "dcmbr/errors.hpp"
#include "dcmbr/rng.hpp"

namespace dcmbr {

namespace {

std::string content_token(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "t" + std::to_string(i);
}

}  // namespace

TaskSpec gen_synthetic_task(int vocab_size, int order, int max_len, double noise,
                            std::uint64_t seed, int num_sources) {
  if (vocab_size < 5) throw ConfigError("gen_synthetic_task: vocab_size must be >= 5");
  if (order < 1) {
    throw ConfigError("gen_synthetic_task: order must be >= 1 (conditionals key on the previous token)");
  }
  if (max_len < 5) throw ConfigError("gen_synthetic_task: max_len must be >= 5");
  if (!(noise >= 0.0) || !(noise < 1.0)) {
    throw ConfigError("gen_synthetic_task: noise must lie in [0, 1)");
  }
  if (num_sources < 1) throw ConfigError("gen_synthetic_task: num_sources must be >= 1");

  std::vector<std::string> tokens{"<s>", "</s>"};
  const int content_count = vocab_size - 2;
  for (int i = 0; i < content_count; ++i) tokens.push_back(content_token(i));
  Vocab vocab(std::move(tokens), 0, 1);
  const TokenId eos = vocab.eos_id();

  if (num_sources > content_count * content_count) {
    throw ConfigError("gen_synthetic_task: num_sources exceeds the distinct source pool");
  }
  const int chain_max = std::min(content_count, max_len - 2);
  if (chain_max < 3) {
    throw ConfigError("gen_synthetic_task: vocab_size/max_len leave no room for a chain");
  }
  const int chain_min = std::max(3, chain_max - 4);

  std::vector<Sequence> sources;
  std::vector<std::vector<Sequence>> refs;
  std::vector<std::unordered_map<std::string, ProbDist>> tables;

  for (int src = 0; src < num_sources; ++src) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(src)));

    const int chain_len =
        chain_min +
        static_cast<int>(next_below(rng, static_cast<std::uint64_t>(chain_max - chain_min + 1)));
    // distinct chain tokens: partial Fisher-Yates over the content ids
    std::vector<TokenId> content_ids(static_cast<std::size_t>(content_count));
    for (int i = 0; i < content_count; ++i) content_ids[static_cast<std::size_t>(i)] = 2 + i;
    for (int i = 0; i < chain_len; ++i) {
      const auto j =
          i + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(content_count - i)));
      std::swap(content_ids[static_cast<std::size_t>(i)], content_ids[static_cast<std::size_t>(j)]);
    }
    std::vector<TokenId> chain(content_ids.begin(), content_ids.begin() + chain_len);

    // position p consumed p chain tokens: gold next = chain[p] (EOS at p=L);
    // the noisy alternative jumps forward past at least one token, or to EOS,
    // so every walk advances and the path DAG fans out by at most 2
    std::vector<TokenId> alt(static_cast<std::size_t>(chain_len), eos);
    for (int p = 0; p < chain_len; ++p) {
      const int options = chain_len - p;  // chain[p+1..L-1] then EOS
      const int pick = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(options)));
      alt[static_cast<std::size_t>(p)] =
          pick < options - 1 ? chain[static_cast<std::size_t>(p + 1 + pick)] : eos;
    }

    auto dist_at = [&](int pos) {
      std::vector<double> probs(static_cast<std::size_t>(vocab_size), 0.0);
      if (pos >= chain_len) {
        probs[static_cast<std::size_t>(eos)] = 1.0;
      } else {
        const TokenId gold = chain[static_cast<std::size_t>(pos)];
        probs[static_cast<std::size_t>(gold)] += 1.0 - noise;
        probs[static_cast<std::size_t>(alt[static_cast<std::size_t>(pos)])] += noise;
      }
      return ProbDist(std::move(probs));
    };
    auto pos_of = [&](TokenId tok) {
      for (int i = 0; i < chain_len; ++i) {
        if (chain[static_cast<std::size_t>(i)] == tok) return i + 1;
      }
      throw ConfigError("gen_synthetic_task: token off the chain");
    };

    // reachable order-k context windows; the last token pins the chain
    // position, so a repeated key always carries the same conditional
    std::unordered_map<std::string, ProbDist> table;
    std::deque<std::pair<std::vector<TokenId>, int>> frontier;
    frontier.emplace_back(std::vector<TokenId>{}, 0);
    while (!frontier.empty()) {
      auto [window, pos] = frontier.front();
      frontier.pop_front();
      const std::string key = context_key(window, order);
      if (table.count(key) > 0) continue;
      const ProbDist dist = dist_at(pos);
      table.emplace(key, dist);
      for (int tok = 0; tok < vocab_size; ++tok) {
        if (dist[tok] <= 0.0 || tok == eos) continue;
        std::vector<TokenId> next = window;
        next.push_back(static_cast<TokenId>(tok));
        if (static_cast<int>(next.size()) > order) next.erase(next.begin());
        frontier.emplace_back(std::move(next), pos_of(static_cast<TokenId>(tok)));
      }
    }
    tables.push_back(std::move(table));

    std::vector<TokenId> src_ids{
        static_cast<TokenId>(2 + src % content_count),
        static_cast<TokenId>(2 + (src / content_count) % content_count)};
    sources.push_back(make_sequence(std::move(src_ids), vocab));

    std::vector<TokenId> gold = chain;
    gold.push_back(eos);
    refs.push_back({make_sequence(std::move(gold), vocab)});
  }

  nlohmann::json meta;
  meta["kind"] = "synthetic";
  meta["vocab_size"] = vocab_size;
  meta["order"] = order;
  meta["max_len"] = max_len;
  meta["noise"] = noise;
  meta["seed"] = seed;
  meta["num_sources"] = num_sources;

  TaskSpec task{std::move(vocab),
                order,
                max_len,
                std::move(sources),
                std::move(refs),
                std::move(tables),
                ProbDist::uniform(vocab_size),
                meta.dump()};
  validate_task(task);
  return task;
}

TaskSpec default_task() { return gen_synthetic_task(12, 1, 12, 0.1, kDefaultTaskSeed, 20); }

std::vector<CollapseRow> collapse_table(const std::vector<double>& lambdas,
                                        const std::vector<int>& lengths) {
  if (lambdas.empty() || lengths.empty()) {
    throw ConfigError("collapse_table: need at least one lambda and one length");
  }
  std::vector<CollapseRow> rows;
  for (const double lambda : lambdas) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
      throw ConfigError("collapse_table: lambda must lie in [0, 1]");
    }
    for (const int len : lengths) {
      if (len < 0) throw ConfigError("collapse_table: length must be >= 0");
      rows.push_back(CollapseRow{lambda, len, std::pow(1.0 - lambda, len)});
    }
  }
  return rows;
}

}  // namespace dcmbr
