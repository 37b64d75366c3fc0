#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dcmbr/report.hpp"
#include "dcmbr/synthetic.hpp"
#include "dcmbr/task.hpp"

namespace dcmbr {

// Everything an experiment run depends on. Loaded from a JSON object whose
// keys mirror the field names (see load_experiment_config); unknown keys are
// rejected so typos fail loudly instead of silently using a default.
struct ExperimentConfig {
  std::string id;
  std::string task_file;  // when set, overrides the synthetic task below
  int vocab_size = 12;
  int markov_order = 1;  // JSON key "order"
  int max_len = 12;
  int num_sources = 20;
  double noise = 0.1;
  std::uint64_t task_seed = kDefaultTaskSeed;
  std::vector<double> lambdas{0.0, 0.1, 0.2, 0.3};
  std::vector<double> temperatures{0.5, 1.0, 1.5};
  std::vector<double> temp_grid{0.2, 0.5, 1.0, 1.5};
  std::vector<int> ns{1, 5, 10, 25, 50};
  double lambda_fixed = 0.1;
  int num_seeds = 10;
  std::uint64_t seed = 99;
  int n_candidates = 10;
  int beam_width = 4;
  int topn = 20;
  int topn_sources = 3;
  // histogram bucket lower edges; |V| is appended as the final edge if missing
  std::vector<int> bucket_edges{0, 1, 2, 3, 5};
  std::string quality_metric = "chrf";
  std::string utility = "chrf";
  int workers = 1;
  std::string out;  // CSV path; empty = stdout (CLI decides)
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
void validate_experiment_config(const ExperimentConfig& cfg);

// The task the experiments run on: loaded from task_file when given,
// otherwise generated from the synthetic-task knobs.
TaskSpec experiment_task(const ExperimentConfig& cfg);

// Runs fn(0..n-1) on up to `workers` threads pulling slot indices from a
// shared counter. Output written per-slot stays deterministic at any worker
// count; the first exception wins and is rethrown after all threads join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Corpus quality of beam search, the plain sampling-based decision rule
// (T=1, shared pool), and the cooled rule (T=0.5, split pools) across the
// lambda grid. Rows: lambda, decoder, quality.
Report exp_quality_vs_lambda(const ExperimentConfig& cfg);

// Rank of the gold token under multiplicatively jittered model conditionals,
// bucketed. The jitter stream depends only on (eval pair, step, replicate),
// never on lambda, so the lambda rows are paired comparisons.
// Rows: lambda, rank_lo, rank_hi, count.
Report exp_rank_histogram(const ExperimentConfig& cfg);

// The exact top-n sequences by model probability with their quality, per
// lambda, on the first topn_sources sources.
// Rows: lambda, source, rank, prob, quality.
Report exp_topn_quality(const ExperimentConfig& cfg);

struct EntropyCorrResult {
  Report report;  // rows: lambda, temperature, entropy, quality
  double tau;     // rank correlation between the entropy and quality columns
};

// Mean teacher-forcing entropy vs decoded quality over the lambda x
// temperature grid, plus their Kendall rank correlation.
EntropyCorrResult exp_entropy_correlation(const ExperimentConfig& cfg);

// Decoded quality as the candidate pool grows, at sampling temperatures
// 0.5 and 1.0 with split pools. Rows: temperature, n, quality.
Report exp_n_sweep(const ExperimentConfig& cfg);

// Quality across temp_grid in three modes: "hyp" cools only the hypothesis
// pool, "ref" only the reference pool, "both" one shared pool at T (also
// reporting the pool's diversity score -- higher = candidates more alike).
// Rows: mode, temperature, quality, diversity (empty outside "both").
Report exp_temp_grid(const ExperimentConfig& cfg);

// Every decode utility x decoder, evaluated under every metric. diagonal_best
// flags whether decoding with the eval metric itself was the best choice.
// Rows: utility, decoder, eval_metric, quality, diagonal_best.
Report exp_utility_grid(const ExperimentConfig& cfg);

// collapse_table over the lambda grid and a fixed length grid: (1-lambda)^L,
// the smoothed-model probability of a length-L gold path whose task
// conditionals are deterministic. Rows: lambda, length, prob.
Report exp_collapse(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_ids();

// Dispatch by cfg.id (entropy-correlation yields its report; the tau is
// available via exp_entropy_correlation directly).
Report run_experiment(const ExperimentConfig& cfg);

}  // namespace dcmbr
