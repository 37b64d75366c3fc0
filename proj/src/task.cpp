#include "dcmbr/task.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dcmbr/errors.hpp"

using nlohmann::json;

namespace dcmbr {

namespace {

std::vector<TokenId> parse_context_key(const std::string& key, const Vocab& vocab) {
  std::vector<TokenId> ids;
  if (key.empty()) return ids;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    int id = 0;
    try {
      id = std::stoi(part, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad context key '" + key + "'");
    }
    if (pos != part.size() || id < 0 || id >= vocab.size()) {
      throw ConfigError("bad context key '" + key + "'");
    }
    ids.push_back(static_cast<TokenId>(id));
  }
  return ids;
}

std::vector<TokenId> ids_from_json(const json& arr) {
  std::vector<TokenId> ids;
  for (const auto& v : arr) ids.push_back(v.get<TokenId>());
  return ids;
}

json ids_to_json(const std::vector<TokenId>& ids) {
  json arr = json::array();
  for (TokenId id : ids) arr.push_back(id);
  return arr;
}

ProbDist dist_from_json(const json& arr, const std::string& where) {
  std::vector<double> probs;
  for (const auto& v : arr) probs.push_back(v.get<double>());
  try {
    return ProbDist(std::move(probs));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

std::string context_key(const std::vector<TokenId>& prefix, int markov_order) {
  if (markov_order < 0) throw ConfigError("markov_order must be >= 0");
  const std::size_t window = std::min<std::size_t>(prefix.size(),
                                                   static_cast<std::size_t>(markov_order));
  std::string key;
  for (std::size_t i = prefix.size() - window; i < prefix.size(); ++i) {
    if (!key.empty()) key += ',';
    key += std::to_string(prefix[i]);
  }
  return key;
}

const ProbDist& task_conditional(const TaskSpec& task, int source_idx,
                                 const std::vector<TokenId>& prefix) {
  if (source_idx < 0 || source_idx >= static_cast<int>(task.sources.size())) {
    throw ConfigError("source index out of range");
  }
  const auto& table = task.tables[static_cast<std::size_t>(source_idx)];
  const auto it = table.find(context_key(prefix, task.markov_order));
  return it == table.end() ? task.default_dist : it->second;
}

void validate_task(const TaskSpec& task) {
  const int v = task.vocab.size();
  if (task.markov_order < 0) throw ConfigError("markov_order must be >= 0");
  if (task.max_len < 1) throw ConfigError("max_len must be >= 1");
  if (task.sources.empty()) throw ConfigError("task needs at least one source");
  if (task.gold_references.size() != task.sources.size()) {
    throw ConfigError("gold_references must have one list per source");
  }
  if (task.tables.size() != task.sources.size()) {
    throw ConfigError("tables must have one map per source");
  }
  if (task.default_dist.size() != v) {
    throw ConfigError("default_dist size must equal vocab size");
  }
  for (std::size_t s = 0; s < task.sources.size(); ++s) {
    const std::string where = "source " + std::to_string(s);
    if (task.gold_references[s].empty()) {
      throw ConfigError(where + ": needs at least one gold reference");
    }
    for (const Sequence& ref : task.gold_references[s]) {
      if (!ref.terminated) throw ConfigError(where + ": gold reference must end with EOS");
      if (static_cast<int>(ref.length()) > task.max_len) {
        throw ConfigError(where + ": gold reference exceeds max_len");
      }
      make_sequence(ref.ids, task.vocab);  // id range / EOS placement check
    }
    for (const auto& [key, dist] : task.tables[s]) {
      const std::string row = where + ", context '" + key + "'";
      if (dist.size() != v) throw ConfigError(row + ": row size must equal vocab size");
      const auto ctx = parse_context_key(key, task.vocab);
      if (static_cast<int>(ctx.size()) > task.markov_order) {
        throw ConfigError(row + ": context longer than markov_order");
      }
    }
  }
}

std::string task_to_json(const TaskSpec& task) {
  json j;
  j["format"] = "dcmbr-task";
  j["version"] = 1;
  j["vocab"] = {{"tokens", task.vocab.tokens()},
                {"bos_id", task.vocab.bos_id()},
                {"eos_id", task.vocab.eos_id()}};
  j["markov_order"] = task.markov_order;
  j["max_len"] = task.max_len;
  json sources = json::array();
  for (const Sequence& s : task.sources) sources.push_back(ids_to_json(s.ids));
  j["sources"] = std::move(sources);
  json refs = json::array();
  for (const auto& per_source : task.gold_references) {
    json list = json::array();
    for (const Sequence& r : per_source) list.push_back(ids_to_json(r.ids));
    refs.push_back(std::move(list));
  }
  j["gold_references"] = std::move(refs);
  j["default_dist"] = task.default_dist.probs();
  json tables = json::array();
  for (const auto& table : task.tables) {
    // emit rows in sorted key order so serialization is deterministic
    std::map<std::string, const ProbDist*> ordered;
    for (const auto& [key, dist] : table) ordered[key] = &dist;
    json t = json::object();
    for (const auto& [key, dist] : ordered) t[key] = dist->probs();
    tables.push_back(std::move(t));
  }
  j["tables"] = std::move(tables);
  if (!task.generator_meta.empty()) {
    j["generator"] = json::parse(task.generator_meta);
  }
  return j.dump(2) + "\n";
}

TaskSpec task_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("task file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "dcmbr-task") {
      throw ConfigError("task file: missing format marker 'dcmbr-task'");
    }
    const json& jv = j.at("vocab");
    Vocab vocab(jv.at("tokens").get<std::vector<std::string>>(),
                jv.at("bos_id").get<TokenId>(), jv.at("eos_id").get<TokenId>());
    const int order = j.at("markov_order").get<int>();
    const int max_len = j.at("max_len").get<int>();

    std::vector<Sequence> sources;
    for (const auto& arr : j.at("sources")) {
      sources.push_back(make_sequence(ids_from_json(arr), vocab));
    }
    std::vector<std::vector<Sequence>> refs;
    for (const auto& list : j.at("gold_references")) {
      std::vector<Sequence> per_source;
      for (const auto& arr : list) per_source.push_back(make_sequence(ids_from_json(arr), vocab));
      refs.push_back(std::move(per_source));
    }
    ProbDist default_dist = dist_from_json(j.at("default_dist"), "default_dist");
    std::vector<std::unordered_map<std::string, ProbDist>> tables;
    std::size_t src = 0;
    for (const auto& t : j.at("tables")) {
      std::unordered_map<std::string, ProbDist> table;
      for (const auto& [key, arr] : t.items()) {
        table.emplace(key, dist_from_json(
                               arr, "source " + std::to_string(src) + ", context '" + key + "'"));
      }
      tables.push_back(std::move(table));
      ++src;
    }
    std::string meta;
    if (j.contains("generator")) meta = j["generator"].dump();

    TaskSpec task{std::move(vocab), order, max_len, std::move(sources), std::move(refs),
                  std::move(tables), std::move(default_dist), std::move(meta)};
    validate_task(task);
    return task;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("task file: ") + e.what());
  }
}

void save_task(const TaskSpec& task, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot open for writing: " + path);
  out << task_to_json(task);
  if (!out) throw IngestError("write failed: " + path);
}

TaskSpec load_task(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open task file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return task_from_json(ss.str());
}

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<TokenId> tokens_to_ids(const std::vector<std::string>& tokens, const Vocab& vocab,
                                   std::size_t line_no) {
  std::vector<TokenId> ids;
  for (const std::string& tok : tokens) {
    const TokenId id = vocab.id_of(tok);
    if (id < 0) {
      throw IngestError("line " + std::to_string(line_no) + ": unknown token '" + tok + "'");
    }
    if (id == vocab.bos_id() || id == vocab.eos_id()) {
      throw IngestError("line " + std::to_string(line_no) + ": reserved marker token '" + tok +
                        "' may not appear in corpus text");
    }
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

std::vector<std::pair<Sequence, Sequence>> parse_corpus(const std::string& text,
                                                        const Vocab& vocab) {
  std::vector<std::pair<Sequence, Sequence>> pairs;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IngestError("line " + std::to_string(line_no) + ": expected 'source<TAB>target'");
    }
    auto src_ids = tokens_to_ids(split_ws(line.substr(0, tab)), vocab, line_no);
    auto tgt_ids = tokens_to_ids(split_ws(line.substr(tab + 1)), vocab, line_no);
    if (src_ids.empty() || tgt_ids.empty()) {
      throw IngestError("line " + std::to_string(line_no) + ": empty source or target");
    }
    tgt_ids.push_back(vocab.eos_id());
    pairs.emplace_back(make_sequence(std::move(src_ids), vocab),
                       make_sequence(std::move(tgt_ids), vocab));
  }
  return pairs;
}

std::vector<std::pair<Sequence, Sequence>> load_corpus(const std::string& path,
                                                       const Vocab& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open corpus file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), vocab);
}

TaskSpec task_from_corpus(const std::vector<std::pair<Sequence, Sequence>>& corpus, int order,
                          const Vocab& vocab, int max_len) {
  if (corpus.empty()) throw IngestError("corpus is empty");
  if (order < 0) throw ConfigError("order must be >= 0");

  std::vector<Sequence> sources;
  std::vector<std::vector<Sequence>> refs;
  std::map<std::vector<TokenId>, std::size_t> source_index;
  // per source: context -> per-token counts
  std::vector<std::unordered_map<std::string, std::vector<long long>>> counts;

  int longest = 0;
  for (const auto& [src, tgt] : corpus) {
    auto [it, inserted] = source_index.emplace(src.ids, sources.size());
    if (inserted) {
      sources.push_back(src);
      refs.emplace_back();
      counts.emplace_back();
    }
    const std::size_t s = it->second;
    refs[s].push_back(tgt);
    longest = std::max(longest, static_cast<int>(tgt.length()));
    std::vector<TokenId> prefix;
    for (const TokenId id : tgt.ids) {
      auto& row = counts[s][context_key(prefix, order)];
      if (row.empty()) row.assign(static_cast<std::size_t>(vocab.size()), 0);
      ++row[static_cast<std::size_t>(id)];
      prefix.push_back(id);
    }
  }
  if (max_len == 0) max_len = longest;

  std::vector<std::unordered_map<std::string, ProbDist>> tables;
  for (const auto& per_source : counts) {
    std::unordered_map<std::string, ProbDist> table;
    for (const auto& [key, row] : per_source) {
      long long total = 0;
      for (long long c : row) total += c;
      std::vector<double> probs(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) {
        probs[i] = static_cast<double>(row[i]) / static_cast<double>(total);
      }
      table.emplace(key, ProbDist(std::move(probs)));
    }
    tables.push_back(std::move(table));
  }

  TaskSpec task{vocab,
                order,
                max_len,
                std::move(sources),
                std::move(refs),
                std::move(tables),
                ProbDist::uniform(vocab.size()),
                std::string()};
  validate_task(task);
  return task;
}

}  // namespace dcmbr
