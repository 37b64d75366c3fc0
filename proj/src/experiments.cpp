#include "dcmbr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "dcmbr/beam.hpp"
#include "dcmbr/errors.hpp"
#include "dcmbr/exact_search.hpp"
#include "dcmbr/mbr.hpp"
#include "dcmbr/metrics.hpp"
#include "dcmbr/model.hpp"
#include "dcmbr/rng.hpp"
#include "dcmbr/sampling.hpp"
#include "dcmbr/stats.hpp"
#include "dcmbr/synthetic.hpp"

namespace dcmbr {

namespace {

using nlohmann::json;

// cooled-pool preset shared with the CLI's dc-mbr verb
constexpr double kCoolT = 0.5;
// seeds averaged by the grid-style experiments (the lambda sweep uses
// cfg.num_seeds; these keep the multi-slot grids inside their time budget)
constexpr int kGridSeeds = 3;
// spread of the multiplicative rank jitter exp(sigma * z)
constexpr double kRankNoiseSigma = 2.0;

const std::vector<int> kCollapseLengths{1, 5, 10, 20, 30};

template <typename T>
std::vector<T> parse_array(const json& val, const std::string& key) {
  if (!val.is_array()) throw ConfigError("experiment config: \"" + key + "\" must be an array");
  std::vector<T> out;
  for (const auto& item : val) out.push_back(item.get<T>());
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");

  ExperimentConfig cfg;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "id") {
        cfg.id = val.get<std::string>();
      } else if (key == "task_file") {
        cfg.task_file = val.get<std::string>();
      } else if (key == "vocab_size") {
        cfg.vocab_size = val.get<int>();
      } else if (key == "order") {
        cfg.markov_order = val.get<int>();
      } else if (key == "max_len") {
        cfg.max_len = val.get<int>();
      } else if (key == "num_sources") {
        cfg.num_sources = val.get<int>();
      } else if (key == "noise") {
        cfg.noise = val.get<double>();
      } else if (key == "task_seed") {
        cfg.task_seed = val.get<std::uint64_t>();
      } else if (key == "lambdas") {
        cfg.lambdas = parse_array<double>(val, key);
      } else if (key == "temperatures") {
        cfg.temperatures = parse_array<double>(val, key);
      } else if (key == "temp_grid") {
        cfg.temp_grid = parse_array<double>(val, key);
      } else if (key == "ns") {
        cfg.ns = parse_array<int>(val, key);
      } else if (key == "lambda_fixed") {
        cfg.lambda_fixed = val.get<double>();
      } else if (key == "num_seeds") {
        cfg.num_seeds = val.get<int>();
      } else if (key == "seed") {
        cfg.seed = val.get<std::uint64_t>();
      } else if (key == "n_candidates") {
        cfg.n_candidates = val.get<int>();
      } else if (key == "beam_width") {
        cfg.beam_width = val.get<int>();
      } else if (key == "topn") {
        cfg.topn = val.get<int>();
      } else if (key == "topn_sources") {
        cfg.topn_sources = val.get<int>();
      } else if (key == "bucket_edges") {
        cfg.bucket_edges = parse_array<int>(val, key);
      } else if (key == "quality_metric") {
        cfg.quality_metric = val.get<std::string>();
      } else if (key == "utility") {
        cfg.utility = val.get<std::string>();
      } else if (key == "workers") {
        cfg.workers = val.get<int>();
      } else if (key == "out") {
        cfg.out = val.get<std::string>();
      } else {
        throw ConfigError("experiment config: unknown key \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

void validate_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("experiment config: workers must be >= 1");
  if (cfg.num_seeds < 1) throw ConfigError("experiment config: num_seeds must be >= 1");
  if (cfg.n_candidates < 1) throw ConfigError("experiment config: n_candidates must be >= 1");
  if (cfg.beam_width < 1) throw ConfigError("experiment config: beam_width must be >= 1");
  if (cfg.topn < 1) throw ConfigError("experiment config: topn must be >= 1");
  if (cfg.topn_sources < 1) throw ConfigError("experiment config: topn_sources must be >= 1");
  if (cfg.lambdas.empty()) throw ConfigError("experiment config: lambdas is empty");
  if (cfg.temperatures.empty()) throw ConfigError("experiment config: temperatures is empty");
  if (cfg.temp_grid.empty()) throw ConfigError("experiment config: temp_grid is empty");
  if (cfg.ns.empty()) throw ConfigError("experiment config: ns is empty");
  for (const int n : cfg.ns) {
    if (n < 1) throw ConfigError("experiment config: ns entries must be >= 1");
  }
  // metric names fail fast rather than mid-run
  parse_utility(cfg.quality_metric);
  parse_utility(cfg.utility);
}

TaskSpec experiment_task(const ExperimentConfig& cfg) {
  if (!cfg.task_file.empty()) return load_task(cfg.task_file);
  return gen_synthetic_task(cfg.vocab_size, cfg.markov_order, cfg.max_len, cfg.noise,
                            cfg.task_seed, cfg.num_sources);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers < 1) throw ConfigError("parallel_for: workers must be >= 1");
  const std::size_t thread_count = std::min(static_cast<std::size_t>(workers), n);
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        next.store(n);  // stop handing out slots
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// mean metric value of hyp against every gold reference of its source
double ref_quality(const UtilityFn& metric, const Sequence& hyp,
                   const std::vector<Sequence>& refs, const Vocab& vocab) {
  double sum = 0.0;
  for (const Sequence& ref : refs) sum += utility_score(metric, hyp, ref, vocab);
  return sum / static_cast<double>(refs.size());
}

std::shared_ptr<const TaskSpec> shared_task(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  return std::make_shared<const TaskSpec>(experiment_task(cfg));
}

// one standard normal; a fresh Box-Muller pair per call keeps the stream
// layout independent of how many draws the caller consumes
double normal_draw(SplitMix64& rng) {
  const double u1 = rng.next_unit_pos();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

Report exp_quality_vs_lambda(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = static_cast<int>(task->sources.size());
  const UtilityFn quality = parse_utility(cfg.quality_metric);
  const UtilityFn utility = parse_utility(cfg.utility);

  const std::vector<std::string> decoders{"beam", "mbr", "dcmbr"};
  std::vector<std::vector<std::vector<std::string>>> slot_rows(cfg.lambdas.size());

  parallel_for(cfg.lambdas.size(), cfg.workers, [&](std::size_t slot) {
    const double lambda = cfg.lambdas[slot];
    const ConditionalLM model(task, lambda);
    const std::uint64_t slot_seed = derive_seed(cfg.seed, slot);

    for (std::size_t d = 0; d < decoders.size(); ++d) {
      double sum = 0.0;
      long long count = 0;
      for (int i = 0; i < num_sources; ++i) {
        const auto& refs = task->gold_references[static_cast<std::size_t>(i)];
        if (decoders[d] == "beam") {
          // deterministic: average over sources only, length-normalized
          // scoring so a cheap early EOS does not outrank the gold path
          const Sequence hyp =
              beam_search(model, i, cfg.beam_width, task->max_len, /*length_normalize=*/true);
          sum += ref_quality(quality, hyp, refs, task->vocab);
          ++count;
          continue;
        }
        for (int s = 0; s < cfg.num_seeds; ++s) {
          MbrConfig mbr;
          mbr.n_hyp = cfg.n_candidates;
          mbr.n_ref = cfg.n_candidates;
          mbr.utility = utility;
          mbr.seed = derive_seed(
              slot_seed, static_cast<std::uint64_t>((d * cfg.num_seeds + s) * num_sources + i));
          if (decoders[d] == "mbr") {
            mbr.t_hyp = 1.0;
            mbr.t_ref = 1.0;
            mbr.share_pools = true;
          } else {
            mbr.t_hyp = kCoolT;
            mbr.t_ref = kCoolT;
            mbr.share_pools = false;
          }
          const MbrDecision decision = mbr_decode(model, i, mbr);
          sum += ref_quality(quality, decision.chosen, refs, task->vocab);
          ++count;
        }
      }
      slot_rows[slot].push_back({format_double(lambda), decoders[d],
                                 format_double(sum / static_cast<double>(count))});
    }
  });

  Report report;
  report.header = {"lambda", "decoder", "quality"};
  for (auto& rows : slot_rows) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

Report exp_rank_histogram(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int vocab_size = task->vocab.size();

  std::vector<int> edges = cfg.bucket_edges;
  if (edges.empty() || edges.back() < vocab_size) edges.push_back(vocab_size);
  if (edges.front() != 0) throw ConfigError("rank histogram: first bucket edge must be 0");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) {
      throw ConfigError("rank histogram: bucket edges must be strictly increasing");
    }
  }
  const std::size_t num_buckets = edges.size() - 1;

  const auto eval_set = task_eval_set(*task);
  const int replicates = cfg.num_seeds;

  std::vector<std::vector<long long>> counts(cfg.lambdas.size(),
                                             std::vector<long long>(num_buckets, 0));

  parallel_for(cfg.lambdas.size(), cfg.workers, [&](std::size_t slot) {
    const ConditionalLM model(task, cfg.lambdas[slot]);
    for (std::size_t e = 0; e < eval_set.size(); ++e) {
      const auto& [src, gold_seq] = eval_set[e];
      std::vector<TokenId> prefix;
      for (std::size_t step = 0; step < gold_seq.ids.size(); ++step) {
        const TokenId gold = gold_seq.ids[step];
        const ProbDist dist = model.next_dist(src, prefix, 1.0);
        for (int r = 0; r < replicates; ++r) {
          // jitter stream keyed by (pair, step, replicate) only: identical
          // noise across lambdas makes the histograms paired comparisons
          SplitMix64 rng(derive_seed(derive_seed(cfg.seed, e),
                                     step * static_cast<std::size_t>(replicates) +
                                         static_cast<std::size_t>(r)));
          std::vector<double> jittered(static_cast<std::size_t>(vocab_size));
          double total = 0.0;
          for (int v = 0; v < vocab_size; ++v) {
            // one draw per token even for zero entries, so the stream
            // position never depends on the distribution's support
            const double z = normal_draw(rng);
            jittered[static_cast<std::size_t>(v)] =
                dist[v] * std::exp(kRankNoiseSigma * z);
            total += jittered[static_cast<std::size_t>(v)];
          }
          for (double& p : jittered) p /= total;
          const int rank = gold_rank(ProbDist(std::move(jittered)), gold);
          const auto bucket =
              std::upper_bound(edges.begin(), edges.end(), rank) - edges.begin() - 1;
          counts[slot][static_cast<std::size_t>(bucket)] += 1;
        }
        prefix.push_back(gold);
      }
    }
  });

  Report report;
  report.header = {"lambda", "rank_lo", "rank_hi", "count"};
  for (std::size_t slot = 0; slot < cfg.lambdas.size(); ++slot) {
    for (std::size_t b = 0; b < num_buckets; ++b) {
      report.rows.push_back({format_double(cfg.lambdas[slot]), std::to_string(edges[b]),
                             std::to_string(edges[b + 1]), std::to_string(counts[slot][b])});
    }
  }
  return report;
}

Report exp_topn_quality(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = std::min(cfg.topn_sources, static_cast<int>(task->sources.size()));
  const UtilityFn quality = parse_utility(cfg.quality_metric);

  std::vector<std::vector<std::vector<std::string>>> slot_rows(cfg.lambdas.size());

  parallel_for(cfg.lambdas.size(), cfg.workers, [&](std::size_t slot) {
    const double lambda = cfg.lambdas[slot];
    const ConditionalLM model(task, lambda);
    for (int i = 0; i < num_sources; ++i) {
      const TopNResult result = exact_topn(model, i, cfg.topn, task->max_len);
      const auto& refs = task->gold_references[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < result.entries.size(); ++k) {
        const TopNEntry& entry = result.entries[k];
        slot_rows[slot].push_back({format_double(lambda), std::to_string(i),
                                   std::to_string(k + 1), format_double(entry.prob),
                                   format_double(ref_quality(quality, entry.seq, refs,
                                                             task->vocab))});
      }
    }
  });

  Report report;
  report.header = {"lambda", "source", "rank", "prob", "quality"};
  for (auto& rows : slot_rows) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

EntropyCorrResult exp_entropy_correlation(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = static_cast<int>(task->sources.size());
  const UtilityFn quality = parse_utility(cfg.quality_metric);
  const UtilityFn utility = parse_utility(cfg.utility);
  const auto eval_set = task_eval_set(*task);

  const std::size_t slots = cfg.lambdas.size() * cfg.temperatures.size();
  std::vector<double> entropies(slots, 0.0);
  std::vector<double> qualities(slots, 0.0);

  parallel_for(slots, cfg.workers, [&](std::size_t slot) {
    const double lambda = cfg.lambdas[slot / cfg.temperatures.size()];
    const double t = cfg.temperatures[slot % cfg.temperatures.size()];
    const ConditionalLM model(task, lambda);
    const std::uint64_t slot_seed = derive_seed(cfg.seed, slot);

    entropies[slot] = mean_teacher_forcing_entropy(model, eval_set, t);

    double sum = 0.0;
    long long count = 0;
    for (int s = 0; s < kGridSeeds; ++s) {
      for (int i = 0; i < num_sources; ++i) {
        MbrConfig mbr;
        mbr.n_hyp = cfg.n_candidates;
        mbr.n_ref = cfg.n_candidates;
        mbr.t_hyp = t;
        mbr.t_ref = t;
        mbr.utility = utility;
        mbr.share_pools = true;
        mbr.seed = derive_seed(slot_seed, static_cast<std::uint64_t>(s * num_sources + i));
        const MbrDecision decision = mbr_decode(model, i, mbr);
        sum += ref_quality(quality, decision.chosen,
                           task->gold_references[static_cast<std::size_t>(i)], task->vocab);
        ++count;
      }
    }
    qualities[slot] = sum / static_cast<double>(count);
  });

  EntropyCorrResult result;
  result.report.header = {"lambda", "temperature", "entropy", "quality"};
  for (std::size_t slot = 0; slot < slots; ++slot) {
    result.report.rows.push_back({format_double(cfg.lambdas[slot / cfg.temperatures.size()]),
                                  format_double(cfg.temperatures[slot % cfg.temperatures.size()]),
                                  format_double(entropies[slot]),
                                  format_double(qualities[slot])});
  }
  result.tau = kendall_tau(entropies, qualities);
  return result;
}

Report exp_n_sweep(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = static_cast<int>(task->sources.size());
  const UtilityFn quality = parse_utility(cfg.quality_metric);
  const UtilityFn utility = parse_utility(cfg.utility);

  const std::vector<double> temps{kCoolT, 1.0};
  const std::size_t slots = temps.size() * cfg.ns.size();
  std::vector<double> qualities(slots, 0.0);

  parallel_for(slots, cfg.workers, [&](std::size_t slot) {
    const double t = temps[slot / cfg.ns.size()];
    const int n = cfg.ns[slot % cfg.ns.size()];
    const ConditionalLM model(task, cfg.lambda_fixed);
    const std::uint64_t slot_seed = derive_seed(cfg.seed, slot);

    double sum = 0.0;
    long long count = 0;
    for (int s = 0; s < kGridSeeds; ++s) {
      for (int i = 0; i < num_sources; ++i) {
        MbrConfig mbr;
        mbr.n_hyp = n;
        mbr.n_ref = n;
        mbr.t_hyp = t;
        mbr.t_ref = t;
        mbr.utility = utility;
        mbr.share_pools = false;
        mbr.seed = derive_seed(slot_seed, static_cast<std::uint64_t>(s * num_sources + i));
        const MbrDecision decision = mbr_decode(model, i, mbr);
        sum += ref_quality(quality, decision.chosen,
                           task->gold_references[static_cast<std::size_t>(i)], task->vocab);
        ++count;
      }
    }
    qualities[slot] = sum / static_cast<double>(count);
  });

  Report report;
  report.header = {"temperature", "n", "quality"};
  for (std::size_t slot = 0; slot < slots; ++slot) {
    report.rows.push_back({format_double(temps[slot / cfg.ns.size()]),
                           std::to_string(cfg.ns[slot % cfg.ns.size()]),
                           format_double(qualities[slot])});
  }
  return report;
}

Report exp_temp_grid(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = static_cast<int>(task->sources.size());
  const UtilityFn quality = parse_utility(cfg.quality_metric);
  const UtilityFn utility = parse_utility(cfg.utility);

  const std::vector<std::string> modes{"hyp", "ref", "both"};
  const std::size_t slots = modes.size() * cfg.temp_grid.size();
  std::vector<double> qualities(slots, 0.0);
  std::vector<double> diversities(slots, 0.0);

  parallel_for(slots, cfg.workers, [&](std::size_t slot) {
    const std::string& mode = modes[slot / cfg.temp_grid.size()];
    const double t = cfg.temp_grid[slot % cfg.temp_grid.size()];
    const ConditionalLM model(task, cfg.lambda_fixed);
    const std::uint64_t slot_seed = derive_seed(cfg.seed, slot);

    double q_sum = 0.0;
    double d_sum = 0.0;
    long long count = 0;
    for (int s = 0; s < kGridSeeds; ++s) {
      for (int i = 0; i < num_sources; ++i) {
        MbrConfig mbr;
        mbr.n_hyp = cfg.n_candidates;
        mbr.n_ref = cfg.n_candidates;
        mbr.utility = utility;
        mbr.seed = derive_seed(slot_seed, static_cast<std::uint64_t>(s * num_sources + i));
        if (mode == "hyp") {
          mbr.t_hyp = t;
          mbr.t_ref = 1.0;
          mbr.share_pools = false;
        } else if (mode == "ref") {
          mbr.t_hyp = 1.0;
          mbr.t_ref = t;
          mbr.share_pools = false;
        } else {
          mbr.t_hyp = t;
          mbr.t_ref = t;
          mbr.share_pools = true;
        }
        const MbrDecision decision = mbr_decode(model, i, mbr);
        q_sum += ref_quality(quality, decision.chosen,
                             task->gold_references[static_cast<std::size_t>(i)], task->vocab);
        if (mode == "both") {
          // the same pool mbr_decode drew (hypothesis sub-stream 0)
          const CandidatePool pool =
              sample_pool(model, i, t, cfg.n_candidates, derive_seed(mbr.seed, 0));
          d_sum += diversity(pool, task->vocab);
        }
        ++count;
      }
    }
    qualities[slot] = q_sum / static_cast<double>(count);
    diversities[slot] = d_sum / static_cast<double>(count);
  });

  Report report;
  report.header = {"mode", "temperature", "quality", "diversity"};
  for (std::size_t slot = 0; slot < slots; ++slot) {
    const std::string& mode = modes[slot / cfg.temp_grid.size()];
    report.rows.push_back({mode, format_double(cfg.temp_grid[slot % cfg.temp_grid.size()]),
                           format_double(qualities[slot]),
                           mode == "both" ? format_double(diversities[slot]) : std::string()});
  }
  return report;
}

Report exp_utility_grid(const ExperimentConfig& cfg) {
  const auto task = shared_task(cfg);
  const int num_sources = static_cast<int>(task->sources.size());

  const std::vector<std::string> utilities{"bleu", "chrf", "exact_match"};
  const std::vector<std::string> decoders{"mbr", "dcmbr"};
  const std::size_t slots = utilities.size() * decoders.size();
  // quality[slot][eval metric]
  std::vector<std::vector<double>> quality(slots, std::vector<double>(utilities.size(), 0.0));

  parallel_for(slots, cfg.workers, [&](std::size_t slot) {
    const std::string& util_name = utilities[slot / decoders.size()];
    const std::string& decoder = decoders[slot % decoders.size()];
    const ConditionalLM model(task, cfg.lambda_fixed);
    const std::uint64_t slot_seed = derive_seed(cfg.seed, slot);

    std::vector<double> sums(utilities.size(), 0.0);
    long long count = 0;
    for (int s = 0; s < kGridSeeds; ++s) {
      for (int i = 0; i < num_sources; ++i) {
        MbrConfig mbr;
        mbr.n_hyp = cfg.n_candidates;
        mbr.n_ref = cfg.n_candidates;
        mbr.utility = parse_utility(util_name);
        mbr.seed = derive_seed(slot_seed, static_cast<std::uint64_t>(s * num_sources + i));
        if (decoder == "mbr") {
          mbr.t_hyp = 1.0;
          mbr.t_ref = 1.0;
          mbr.share_pools = true;
        } else {
          mbr.t_hyp = kCoolT;
          mbr.t_ref = kCoolT;
          mbr.share_pools = false;
        }
        const MbrDecision decision = mbr_decode(model, i, mbr);
        const auto& refs = task->gold_references[static_cast<std::size_t>(i)];
        for (std::size_t e = 0; e < utilities.size(); ++e) {
          sums[e] += ref_quality(parse_utility(utilities[e]), decision.chosen, refs, task->vocab);
        }
        ++count;
      }
    }
    for (std::size_t e = 0; e < utilities.size(); ++e) {
      quality[slot][e] = sums[e] / static_cast<double>(count);
    }
  });

  Report report;
  report.header = {"utility", "decoder", "eval_metric", "quality", "diagonal_best"};
  for (std::size_t slot = 0; slot < slots; ++slot) {
    const std::size_t u = slot / decoders.size();
    const std::size_t d = slot % decoders.size();
    for (std::size_t e = 0; e < utilities.size(); ++e) {
      std::string diagonal;
      if (u == e) {
        // did decoding with the eval metric itself win (ties count)?
        double best = quality[e * decoders.size() + d][e];
        for (std::size_t u2 = 0; u2 < utilities.size(); ++u2) {
          best = std::max(best, quality[u2 * decoders.size() + d][e]);
        }
        diagonal = quality[slot][e] >= best - 1e-12 ? "1" : "0";
      }
      report.rows.push_back({utilities[u], decoders[d], utilities[e],
                             format_double(quality[slot][e]), diagonal});
    }
  }
  return report;
}

Report exp_collapse(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  Report report;
  report.header = {"lambda", "length", "prob"};
  for (const CollapseRow& row : collapse_table(cfg.lambdas, kCollapseLengths)) {
    report.rows.push_back(
        {format_double(row.lambda), std::to_string(row.length), format_double(row.prob)});
  }
  return report;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{
      "quality-vs-lambda", "rank-histogram", "topn-quality", "entropy-correlation",
      "n-sweep",           "temp-grid",      "utility-grid", "collapse"};
  return ids;
}

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.id == "quality-vs-lambda") return exp_quality_vs_lambda(cfg);
  if (cfg.id == "rank-histogram") return exp_rank_histogram(cfg);
  if (cfg.id == "topn-quality") return exp_topn_quality(cfg);
  if (cfg.id == "entropy-correlation") return exp_entropy_correlation(cfg).report;
  if (cfg.id == "n-sweep") return exp_n_sweep(cfg);
  if (cfg.id == "temp-grid") return exp_temp_grid(cfg);
  if (cfg.id == "utility-grid") return exp_utility_grid(cfg);
  if (cfg.id == "collapse") return exp_collapse(cfg);
  std::string known;
  for (const auto& id : experiment_ids()) {
    if (!known.empty()) known += ", ";
    known += id;
  }
  throw ConfigError("unknown experiment id \"" + cfg.id + "\" (known: " + known + ")");
}

}  // namespace dcmbr
