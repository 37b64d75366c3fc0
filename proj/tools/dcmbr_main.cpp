#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "dcmbr/beam.hpp"
#include "dcmbr/errors.hpp"
#include "dcmbr/exact_search.hpp"
#include "dcmbr/experiments.hpp"
#include "dcmbr/mbr.hpp"
#include "dcmbr/metrics.hpp"
#include "dcmbr/model.hpp"
#include "dcmbr/report.hpp"
#include "dcmbr/rng.hpp"
#include "dcmbr/sampling.hpp"
#include "dcmbr/smoothing.hpp"
#include "dcmbr/stats.hpp"
#include "dcmbr/synthetic.hpp"
#include "dcmbr/task.hpp"

using namespace dcmbr;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// file lines as sentences; interior blank lines are empty sentences
std::vector<std::string> read_lines(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> lines;
  std::string cur;
  for (const char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

double score_tokens(const UtilityFn& u, const std::vector<std::string>& hyp,
                    const std::vector<std::string>& ref) {
  switch (u.kind) {
    case UtilityKind::kSentenceBleu:
      return sentence_bleu_tokens(hyp, ref, u.bleu_max_order);
    case UtilityKind::kChrf:
      return chrf_tokens(hyp, ref, u.chrf_char_order, u.chrf_beta);
    case UtilityKind::kExactMatch:
      return exact_match_tokens(hyp, ref) ? 1.0 : 0.0;
  }
  throw ConfigError("score: unknown metric kind");
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::shared_ptr<const TaskSpec> load_shared_task(const std::string& path) {
  if (path.empty()) throw ConfigError("a task file is required (--task)");
  return std::make_shared<const TaskSpec>(load_task(path));
}

void check_source(const ConditionalLM& model, int source) {
  if (source < 0 || source >= model.num_sources()) {
    throw ConfigError("source index " + std::to_string(source) + " out of range (task has " +
                      std::to_string(model.num_sources()) + " sources)");
  }
}

std::vector<int> source_list(const ConditionalLM& model, int source) {
  if (source < 0) {
    std::vector<int> all(static_cast<std::size_t>(model.num_sources()));
    for (int i = 0; i < model.num_sources(); ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  check_source(model, source);
  return {source};
}

json seq_fields(const Sequence& seq, const Vocab& vocab) {
  json j;
  j["token_ids"] = seq.ids;
  j["tokens"] = join_tokens(to_tokens(seq, vocab));
  j["terminated"] = seq.terminated;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;

  CLI::App app{"dcmbr: a decoding laboratory for exactly computable autoregressive tasks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dcmbr 0.1.0");
  auto* seed_opt =
      app.add_option("--seed", g.seed, "base RNG seed (default 0; gen-task alone defaults to " +
                                           std::to_string(kDefaultTaskSeed) + ")");
  app.add_option("--config", g.config, "experiment config JSON file");
  app.add_option("--out", g.out, "write output to this file instead of stdout");

  // gen-task
  struct {
    int vocab_size = 12;
    int order = 1;
    int max_len = 12;
    int num_sources = 20;
    double noise = 0.1;
  } gt;
  auto* sc_gen = app.add_subcommand("gen-task", "generate a synthetic task (JSON)");
  sc_gen->fallthrough();
  sc_gen->add_option("--vocab-size", gt.vocab_size, "vocabulary size incl. markers (default 12)");
  sc_gen->add_option("--order", gt.order, "context window length (default 1)");
  sc_gen->add_option("--max-len", gt.max_len, "target length cap incl. EOS (default 12)");
  sc_gen->add_option("--num-sources", gt.num_sources, "number of sources (default 20)");
  sc_gen->add_option("--noise", gt.noise, "off-gold step probability in [0,1) (default 0.1)");

  // sample
  struct {
    std::string task;
    int source = 0;
    double t = 1.0;
    int n = 10;
    double lambda = 0.0;
  } sp;
  auto* sc_sample = app.add_subcommand("sample", "draw a candidate pool (JSONL)");
  sc_sample->fallthrough();
  sc_sample->add_option("--task", sp.task, "task JSON file")->required();
  sc_sample->add_option("--source", sp.source, "source index (default 0)");
  sc_sample->add_option("--t", sp.t, "sampling temperature (default 1)");
  sc_sample->add_option("--n", sp.n, "pool size (default 10)");
  sc_sample->add_option("--lambda", sp.lambda, "smoothing factor (default 0)");

  // beam-decode
  struct {
    std::string task;
    int source = -1;
    double lambda = 0.0;
    int width = 4;
    bool length_normalize = false;
  } bm;
  auto* sc_beam = app.add_subcommand("beam-decode", "beam search per source (JSONL)");
  sc_beam->fallthrough();
  sc_beam->add_option("--task", bm.task, "task JSON file")->required();
  sc_beam->add_option("--source", bm.source, "source index; -1 = all (default)");
  sc_beam->add_option("--lambda", bm.lambda, "smoothing factor (default 0)");
  sc_beam->add_option("--beam-width", bm.width, "beam width (default 4)");
  sc_beam->add_flag("--length-normalize", bm.length_normalize,
                    "compare hypotheses by logprob/length");

  // exact-topn
  struct {
    std::string task;
    int source = 0;
    int n = 20;
    double lambda = 0.0;
    std::uint64_t budget = kDefaultNodeBudget;
    bool no_prune = false;
  } tn;
  auto* sc_topn = app.add_subcommand("exact-topn", "exact n best sequences by model probability");
  sc_topn->fallthrough();
  sc_topn->add_option("--task", tn.task, "task JSON file")->required();
  sc_topn->add_option("--source", tn.source, "source index (default 0)");
  sc_topn->add_option("--n", tn.n, "how many sequences (default 20)");
  sc_topn->add_option("--lambda", tn.lambda, "smoothing factor (default 0)");
  sc_topn->add_option("--budget", tn.budget, "node budget before giving up");
  sc_topn->add_flag("--no-prune", tn.no_prune, "disable pruning (cross-checks only)");

  // mbr-decode
  struct {
    std::string task;
    int source = -1;
    double lambda = 0.0;
    int n_hyp = 10;
    int n_ref = 10;
    double t_hyp = 1.0;
    double t_ref = 1.0;
    std::string utility = "chrf";
    bool share = false;
  } mb;
  auto* sc_mbr = app.add_subcommand(
      "mbr-decode", "sampling-based expected-utility decoding (JSONL; the per-source "
                    "decode seed is derived from --seed and the source index)");
  sc_mbr->fallthrough();
  sc_mbr->add_option("--task", mb.task, "task JSON file")->required();
  sc_mbr->add_option("--source", mb.source, "source index; -1 = all (default)");
  sc_mbr->add_option("--lambda", mb.lambda, "smoothing factor (default 0)");
  sc_mbr->add_option("--n-hyp", mb.n_hyp, "hypothesis pool size (default 10)");
  sc_mbr->add_option("--n-ref", mb.n_ref, "reference pool size (default 10)");
  sc_mbr->add_option("--t-hyp", mb.t_hyp, "hypothesis pool temperature (default 1)");
  sc_mbr->add_option("--t-ref", mb.t_ref, "reference pool temperature (default 1)");
  sc_mbr->add_option("--utility", mb.utility, "bleu | chrf | exact_match (default chrf)");
  sc_mbr->add_flag("--share-pools", mb.share, "one pool serves both roles");

  // dc-mbr
  struct {
    std::string task;
    int source = -1;
    double lambda = 0.0;
    int n = 10;
    std::string utility = "chrf";
  } dc;
  auto* sc_dc = app.add_subcommand(
      "dc-mbr", "cooled preset: both pools at T=0.5, drawn independently (JSONL)");
  sc_dc->fallthrough();
  sc_dc->add_option("--task", dc.task, "task JSON file")->required();
  sc_dc->add_option("--source", dc.source, "source index; -1 = all (default)");
  sc_dc->add_option("--lambda", dc.lambda, "smoothing factor (default 0)");
  sc_dc->add_option("--n", dc.n, "pool size for both roles (default 10)");
  sc_dc->add_option("--utility", dc.utility, "bleu | chrf | exact_match (default chrf)");

  // score
  struct {
    std::string metric = "chrf";
    std::string hyp;
    std::string ref;
    std::string hyp_file;
    std::string ref_file;
  } sc;
  auto* sc_score = app.add_subcommand("score", "score raw token strings (no task needed)");
  sc_score->fallthrough();
  sc_score->add_option("--metric", sc.metric, "bleu | chrf | exact_match (default chrf)");
  sc_score->add_option("--hyp", sc.hyp, "hypothesis tokens, whitespace separated");
  sc_score->add_option("--ref", sc.ref, "reference tokens, whitespace separated");
  sc_score->add_option("--hyp-file", sc.hyp_file, "hypothesis file, one sentence per line");
  sc_score->add_option("--ref-file", sc.ref_file, "reference file, one sentence per line");

  // equiv-temp
  struct {
    double l1 = 0.0;
    double l2 = 0.0;
    int vocab_size = 0;
    bool uncorrected = false;
  } eq;
  auto* sc_eq = app.add_subcommand(
      "equiv-temp", "temperature mapping the lambda1 smoothing optimum onto lambda2");
  sc_eq->fallthrough();
  sc_eq->add_option("--lambda1", eq.l1, "source smoothing factor")->required();
  sc_eq->add_option("--lambda2", eq.l2, "target smoothing factor")->required();
  sc_eq->add_option("--vocab-size", eq.vocab_size, "vocabulary size")->required();
  sc_eq->add_flag("--uncorrected", eq.uncorrected,
                  "also print the variant without the vocabulary-size factors "
                  "(does not round-trip; kept for comparison)");

  // entropy
  struct {
    std::string dist;
    std::string task;
    double lambda = 0.0;
    double t = 1.0;
  } en;
  auto* sc_entropy = app.add_subcommand(
      "entropy", "Shannon entropy (nats) of a distribution or of a task's conditionals");
  sc_entropy->fallthrough();
  sc_entropy->add_option("--dist", en.dist, "comma-separated probabilities");
  sc_entropy->add_option("--task", en.task,
                         "task JSON file: mean next-token entropy over all gold prefixes");
  sc_entropy->add_option("--lambda", en.lambda, "smoothing factor (with --task; default 0)");
  sc_entropy->add_option("--t", en.t, "temperature (with --task; default 1)");

  // experiment
  struct {
    std::string id;
    int workers = 1;
    bool list = false;
  } ex;
  auto* sc_exp = app.add_subcommand("experiment", "run a reporting experiment (CSV)");
  sc_exp->fallthrough();
  sc_exp->add_option("id", ex.id, "experiment id (see --list)");
  auto* workers_opt =
      sc_exp->add_option("--workers", ex.workers, "worker threads; output is identical at any count");
  sc_exp->add_flag("--list", ex.list, "print the known experiment ids and exit");

  // bootstrap
  struct {
    std::string hyp_a;
    std::string hyp_b;
    std::string ref;
    std::string metric = "chrf";
    int resamples = 1000;
  } bs;
  auto* sc_boot = app.add_subcommand(
      "bootstrap", "paired significance of system B over A on aligned sentence files");
  sc_boot->fallthrough();
  sc_boot->add_option("--hyp-a", bs.hyp_a, "system A output, one sentence per line")->required();
  sc_boot->add_option("--hyp-b", bs.hyp_b, "system B output, one sentence per line")->required();
  sc_boot->add_option("--ref", bs.ref, "reference file, one sentence per line")->required();
  sc_boot->add_option("--metric", bs.metric, "bleu | chrf | exact_match (default chrf)");
  sc_boot->add_option("--resamples", bs.resamples, "bootstrap resamples, >= 100 (default 1000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  g.seed_given = seed_opt->count() > 0;

  try {
    if (sc_gen->parsed()) {
      const std::uint64_t seed = g.seed_given ? g.seed : kDefaultTaskSeed;
      const TaskSpec task =
          gen_synthetic_task(gt.vocab_size, gt.order, gt.max_len, gt.noise, seed, gt.num_sources);
      emit(g, task_to_json(task));
    } else if (sc_sample->parsed()) {
      const ConditionalLM model(load_shared_task(sp.task), sp.lambda);
      check_source(model, sp.source);
      const CandidatePool pool = sample_pool(model, sp.source, sp.t, sp.n, g.seed);
      emit(g, pool_to_jsonl(pool, model.vocab()));
    } else if (sc_beam->parsed()) {
      const ConditionalLM model(load_shared_task(bm.task), bm.lambda);
      std::string out;
      for (const int i : source_list(model, bm.source)) {
        const BeamResult r =
            beam_search_scored(model, i, bm.width, model.max_len(), bm.length_normalize);
        json line = seq_fields(r.seq, model.vocab());
        line["source"] = i;
        line["logprob"] = r.logprob;
        out += line.dump() + "\n";
      }
      emit(g, out);
    } else if (sc_topn->parsed()) {
      const ConditionalLM model(load_shared_task(tn.task), tn.lambda);
      check_source(model, tn.source);
      const TopNResult res =
          exact_topn(model, tn.source, tn.n, model.max_len(), tn.budget, !tn.no_prune);
      json doc;
      doc["source"] = tn.source;
      doc["n_requested"] = res.n_requested;
      doc["fewer_than_requested"] = res.fewer_than_requested;
      doc["nodes_visited"] = res.nodes_visited;
      doc["entries"] = json::array();
      for (std::size_t k = 0; k < res.entries.size(); ++k) {
        json entry = seq_fields(res.entries[k].seq, model.vocab());
        entry["rank"] = k + 1;
        entry["prob"] = res.entries[k].prob;
        doc["entries"].push_back(std::move(entry));
      }
      emit(g, doc.dump(2) + "\n");
    } else if (sc_mbr->parsed() || sc_dc->parsed()) {
      const bool cooled = sc_dc->parsed();
      const ConditionalLM model(load_shared_task(cooled ? dc.task : mb.task),
                                cooled ? dc.lambda : mb.lambda);
      MbrConfig base;
      if (cooled) {
        base.n_hyp = dc.n;
        base.n_ref = dc.n;
        base.t_hyp = 0.5;
        base.t_ref = 0.5;
        base.share_pools = false;
        base.utility = parse_utility(dc.utility);
      } else {
        base.n_hyp = mb.n_hyp;
        base.n_ref = mb.n_ref;
        base.t_hyp = mb.t_hyp;
        base.t_ref = mb.t_ref;
        base.share_pools = mb.share;
        base.utility = parse_utility(mb.utility);
      }
      std::string out;
      for (const int i : source_list(model, cooled ? dc.source : mb.source)) {
        MbrConfig cfg = base;
        cfg.seed = derive_seed(g.seed, static_cast<std::uint64_t>(i));
        const MbrDecision d = mbr_decode(model, i, cfg);
        json line = seq_fields(d.chosen, model.vocab());
        line["source"] = i;
        line["mu_hat"] = d.mu_hat;
        line["chosen_index"] = d.chosen_index;
        line["utility_calls"] = d.utility_calls;
        out += line.dump() + "\n";
      }
      emit(g, out);
    } else if (sc_score->parsed()) {
      const UtilityFn u = parse_utility(sc.metric);
      const bool pair = sc_score->count("--hyp") > 0 || sc_score->count("--ref") > 0;
      const bool files = sc_score->count("--hyp-file") > 0 || sc_score->count("--ref-file") > 0;
      if (pair == files) {
        throw ConfigError("score: give --hyp/--ref or --hyp-file/--ref-file");
      }
      double value = 0.0;
      if (pair) {
        if (sc_score->count("--hyp") == 0 || sc_score->count("--ref") == 0) {
          throw ConfigError("score: --hyp and --ref go together");
        }
        value = score_tokens(u, split_ws(sc.hyp), split_ws(sc.ref));
      } else {
        if (sc_score->count("--hyp-file") == 0 || sc_score->count("--ref-file") == 0) {
          throw ConfigError("score: --hyp-file and --ref-file go together");
        }
        const auto hyps = read_lines(sc.hyp_file);
        const auto refs = read_lines(sc.ref_file);
        if (hyps.size() != refs.size()) {
          throw ConfigError("score: hypothesis and reference files differ in line count");
        }
        if (hyps.empty()) throw ConfigError("score: files are empty");
        for (std::size_t i = 0; i < hyps.size(); ++i) {
          value += score_tokens(u, split_ws(hyps[i]), split_ws(refs[i]));
        }
        value /= static_cast<double>(hyps.size());
      }
      emit(g, "score=" + format_double(value) + "\n");
    } else if (sc_eq->parsed()) {
      const double t = equivalence_temperature(eq.l1, eq.l2, eq.vocab_size);
      std::string out = "temperature=" + format_double(t) + "\n";
      if (t > 0.0) {
        const double rt = std::abs(effective_smoothing(eq.l1, t, eq.vocab_size) - eq.l2);
        out += "round_trip_error=" + format_double(rt) + "\n";
      } else {
        out += "note=no positive temperature connects these factors\n";
      }
      if (eq.uncorrected) {
        out += "uncorrected=" + format_double(equivalence_temperature_uncorrected(eq.l1, eq.l2)) +
               "\n";
      }
      emit(g, out);
    } else if (sc_entropy->parsed()) {
      const bool has_dist = sc_entropy->count("--dist") > 0;
      const bool has_task = sc_entropy->count("--task") > 0;
      if (has_dist == has_task) {
        throw ConfigError("entropy: give exactly one of --dist or --task");
      }
      double value = 0.0;
      if (has_dist) {
        std::vector<double> probs;
        std::string cell;
        std::istringstream ss(en.dist);
        while (std::getline(ss, cell, ',')) {
          try {
            probs.push_back(std::stod(cell));
          } catch (const std::exception&) {
            throw ConfigError("entropy: cannot parse \"" + cell + "\" as a probability");
          }
        }
        value = token_entropy(ProbDist(std::move(probs)));
      } else {
        const ConditionalLM model(load_shared_task(en.task), en.lambda);
        value = mean_teacher_forcing_entropy(model, task_eval_set(model.task()), en.t);
      }
      emit(g, "entropy=" + format_double(value) + "\n");
    } else if (sc_exp->parsed()) {
      if (ex.list) {
        std::string out;
        for (const auto& id : experiment_ids()) out += id + "\n";
        emit(g, out);
        return 0;
      }
      ExperimentConfig cfg =
          g.config.empty() ? ExperimentConfig{} : load_experiment_config(g.config);
      if (!ex.id.empty()) cfg.id = ex.id;
      if (cfg.id.empty()) throw ConfigError("experiment: no id given (argument or config)");
      if (g.seed_given) cfg.seed = g.seed;
      if (workers_opt->count() > 0) cfg.workers = ex.workers;
      if (!g.out.empty()) cfg.out = g.out;

      std::string csv;
      bool has_tau = false;
      double tau = 0.0;
      if (cfg.id == "entropy-correlation") {
        const EntropyCorrResult res = exp_entropy_correlation(cfg);
        csv = report_to_csv(res.report);
        tau = res.tau;
        has_tau = true;
      } else {
        csv = report_to_csv(run_experiment(cfg));
      }
      if (cfg.out.empty()) {
        std::cout << csv;
        if (has_tau) std::cerr << "tau=" << format_double(tau) << "\n";
      } else {
        write_text_file(cfg.out, csv);
        if (has_tau) std::cout << "tau=" << format_double(tau) << "\n";
      }
    } else if (sc_boot->parsed()) {
      const UtilityFn u = parse_utility(bs.metric);
      const auto hyps_a = read_lines(bs.hyp_a);
      const auto hyps_b = read_lines(bs.hyp_b);
      const auto refs = read_lines(bs.ref);
      if (hyps_a.size() != refs.size() || hyps_b.size() != refs.size()) {
        throw ConfigError("bootstrap: the three files differ in line count");
      }
      if (refs.empty()) throw ConfigError("bootstrap: files are empty");
      std::vector<double> scores_a;
      std::vector<double> scores_b;
      for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto ref_tokens = split_ws(refs[i]);
        scores_a.push_back(score_tokens(u, split_ws(hyps_a[i]), ref_tokens));
        scores_b.push_back(score_tokens(u, split_ws(hyps_b[i]), ref_tokens));
      }
      const BootstrapResult res =
          paired_bootstrap_scores(scores_a, scores_b, bs.resamples, g.seed);
      std::string out;
      out += "p_a_better=" + format_double(res.p_a_better) + "\n";
      out += "p_b_better=" + format_double(res.p_b_better) + "\n";
      out += "corpus_a=" + format_double(res.corpus_a) + "\n";
      out += "corpus_b=" + format_double(res.corpus_b) + "\n";
      out += "resamples=" + std::to_string(res.resamples) + "\n";
      emit(g, out);
    }
    return 0;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
