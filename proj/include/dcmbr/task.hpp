#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcmbr/types.hpp"

namespace dcmbr {

// Ground-truth task: per-source conditional tables over order-k contexts plus
// gold references. Immutable after construction; all queries are const.
struct TaskSpec {
  Vocab vocab;
  int markov_order;
  int max_len;
  std::vector<Sequence> sources;
  std::vector<std::vector<Sequence>> gold_references;            // >= 1 per source
  std::vector<std::unordered_map<std::string, ProbDist>> tables;  // per source
  ProbDist default_dist;  // fallback for contexts with no table entry
  std::string generator_meta;  // provenance (JSON text), carried verbatim; may be empty
};

// Key of the order-k window that ends `prefix`: the last min(k, |prefix|)
// ids joined with ','; "" at the sequence start (and always "" for k=0).
std::string context_key(const std::vector<TokenId>& prefix, int markov_order);

// The task conditional at (source, prefix): table row or default_dist.
const ProbDist& task_conditional(const TaskSpec& task, int source_idx,
                                 const std::vector<TokenId>& prefix);

// Structural checks (shapes, reference termination, table rows). Throws
// ConfigError naming the offending source/context.
void validate_task(const TaskSpec& task);

std::string task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const std::string& text);
void save_task(const TaskSpec& task, const std::string& path);
TaskSpec load_task(const std::string& path);

// Corpus text: one pair per line, "source<TAB>target", tokens whitespace
// separated. Targets receive a trailing EOS; the BOS/EOS marker strings may
// not appear as corpus tokens. Throws IngestError naming line and token.
std::vector<std::pair<Sequence, Sequence>> parse_corpus(const std::string& text,
                                                        const Vocab& vocab);
std::vector<std::pair<Sequence, Sequence>> load_corpus(const std::string& path,
                                                       const Vocab& vocab);

// Relative-frequency estimates over order-k contexts; unseen contexts fall
// back to uniform. Gold references are the corpus targets; max_len 0 means
// "longest target". Distinct sources are indexed in first-seen order.
TaskSpec task_from_corpus(const std::vector<std::pair<Sequence, Sequence>>& corpus,
                          int order, const Vocab& vocab, int max_len = 0);

}  // namespace dcmbr
