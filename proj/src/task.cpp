#include "salt/task.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <json.hpp>

namespace salt {

namespace {

using nlohmann::json;

constexpr int kFallbackLmOrder = 3;  // when lm_path holds a raw corpus
constexpr double kStyleAlpha = 1.0;

[[noreturn]] void bad(const std::string& message) {
  throw std::invalid_argument(message);
}

void reject_unknown_keys(const json& obj, const std::string& prefix,
                         std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      bad("unknown config key: " + prefix + it.key());
    }
  }
}

double as_number(const json& value, const std::string& key) {
  if (!value.is_number()) bad("config key " + key + ": expected a number");
  return value.get<double>();
}

int as_integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) bad("config key " + key + ": expected an integer");
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& key) {
  if (!value.is_string()) bad("config key " + key + ": expected a string");
  return value.get<std::string>();
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "sa") return Algorithm::kSimulatedAnnealing;
  if (name == "mh") return Algorithm::kMetropolisHastings;
  if (name == "hill") return Algorithm::kHillClimb;
  bad("config key algorithm: must be one of sa|mh|hill");
}

EditOps parse_enabled_ops(const json& value) {
  if (!value.is_array()) bad("config key enabled_ops: expected an array");
  EditOps ops{false, false, false};
  for (const json& entry : value) {
    std::string op = as_string(entry, "enabled_ops");
    if (op == "replace") {
      ops.replace = true;
    } else if (op == "insert") {
      ops.insert = true;
    } else if (op == "delete") {
      ops.erase = true;
    } else {
      bad("config key enabled_ops: unknown op " + op);
    }
  }
  if (!ops.any()) bad("config key enabled_ops: must not be empty");
  return ops;
}

ComponentSpec parse_component(const json& entry, const std::string& prefix) {
  if (!entry.is_object()) bad(prefix + ": expected an object");
  reject_unknown_keys(entry, prefix + ".", {"name", "weight", "params"});
  if (!entry.contains("name")) bad(prefix + ": missing name");

  ComponentSpec spec;
  spec.name = as_string(entry.at("name"), prefix + ".name");
  static const std::initializer_list<std::string_view> kNames = {
      "fluency", "semantic", "keyword", "length", "diversity", "flesch", "style"};
  if (std::find(kNames.begin(), kNames.end(), spec.name) == kNames.end()) {
    bad("unknown component: " + spec.name);
  }
  if (entry.contains("weight")) {
    spec.weight = as_number(entry.at("weight"), prefix + ".weight");
    if (!(spec.weight >= 0.0) || !std::isfinite(spec.weight)) {
      bad(prefix + ".weight: must be finite and >= 0");
    }
  }

  const json params = entry.contains("params") ? entry.at("params") : json::object();
  if (!params.is_object()) bad(prefix + ".params: expected an object");
  if (spec.name == "semantic") {
    reject_unknown_keys(params, prefix + ".params.", {"beta", "gamma"});
    if (params.contains("beta")) {
      spec.semantic.beta = as_number(params.at("beta"), prefix + ".params.beta");
    }
    if (params.contains("gamma")) {
      spec.semantic.gamma = as_number(params.at("gamma"), prefix + ".params.gamma");
    }
  } else if (spec.name == "diversity") {
    reject_unknown_keys(params, prefix + ".params.", {"max_n"});
    if (params.contains("max_n")) {
      spec.max_n = as_integer(params.at("max_n"), prefix + ".params.max_n");
      if (spec.max_n < 1 || spec.max_n > 4) bad(prefix + ".params.max_n: must be in [1,4]");
    }
  } else {
    reject_unknown_keys(params, prefix + ".params.", {});
  }
  return spec;
}

bool looks_like_lm_dump(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  return static_cast<bool>(in) && std::getline(in, first) && first == "salt-ngram-v1";
}

bool wants_component(const GenConfig& cfg, std::string_view name) {
  return std::any_of(cfg.components.begin(), cfg.components.end(),
                     [name](const ComponentSpec& c) { return c.name == name; });
}

int eligible_word_count(const Sentence& x) {
  return static_cast<int>(std::count_if(x.tokens.begin(), x.tokens.end(), [](const Token& t) {
    return !is_punctuation_token(t);
  }));
}

}  // namespace

TaskKind parse_task(const std::string& name) {
  if (name == "paraphrase") return TaskKind::kParaphrase;
  if (name == "summarize") return TaskKind::kSummarize;
  if (name == "keywords") return TaskKind::kKeywords;
  if (name == "correct") return TaskKind::kCorrect;
  if (name == "style") return TaskKind::kStyle;
  bad("unknown task: " + name);
}

GenConfig parse_gen_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("config must be a JSON object");
  reject_unknown_keys(doc, "",
                      {"algorithm", "iterations", "T0", "cooling_rate", "T_min",
                       "shortlist_K", "enabled_ops", "components", "lm_path",
                       "embeddings_path", "budget_k", "style_model_path",
                       "target_style", "learn"});

  GenConfig cfg;
  if (doc.contains("algorithm")) {
    cfg.search.algorithm = parse_algorithm(as_string(doc.at("algorithm"), "algorithm"));
  }
  if (doc.contains("iterations")) {
    cfg.search.iterations = as_integer(doc.at("iterations"), "iterations");
  }
  if (doc.contains("T0")) cfg.search.t0 = as_number(doc.at("T0"), "T0");
  if (doc.contains("T_min")) cfg.search.t_min = as_number(doc.at("T_min"), "T_min");
  if (doc.contains("cooling_rate")) {
    cfg.search.cooling_rate = as_number(doc.at("cooling_rate"), "cooling_rate");
  } else if (cfg.search.iterations >= 1) {
    cfg.search.cooling_rate = cfg.search.t0 / cfg.search.iterations;
  }
  if (doc.contains("shortlist_K")) {
    cfg.search.shortlist_k = as_integer(doc.at("shortlist_K"), "shortlist_K");
  }
  if (doc.contains("enabled_ops")) {
    cfg.search.enabled_ops = parse_enabled_ops(doc.at("enabled_ops"));
  }
  cfg.search.validate();

  if (!doc.contains("components")) bad("config key components: required");
  const json& components = doc.at("components");
  if (!components.is_array() || components.empty()) {
    bad("config key components: expected a non-empty array");
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    cfg.components.push_back(
        parse_component(components.at(i), "components[" + std::to_string(i) + "]"));
  }

  if (!doc.contains("lm_path")) bad("config key lm_path: required");
  cfg.lm_path = as_string(doc.at("lm_path"), "lm_path");
  if (cfg.lm_path.empty()) bad("config key lm_path: must not be empty");
  if (doc.contains("embeddings_path")) {
    cfg.embeddings_path = as_string(doc.at("embeddings_path"), "embeddings_path");
  }
  if (doc.contains("budget_k")) {
    cfg.budget_k = as_integer(doc.at("budget_k"), "budget_k");
    if (cfg.budget_k < 1) bad("config key budget_k: must be >= 1");
  }
  if (doc.contains("style_model_path")) {
    cfg.style_model_path = as_string(doc.at("style_model_path"), "style_model_path");
  }
  if (doc.contains("target_style")) {
    cfg.target_style = as_string(doc.at("target_style"), "target_style");
  }
  if (doc.contains("learn")) {
    const json& learn = doc.at("learn");
    if (!learn.is_object()) bad("config key learn: expected an object");
    reject_unknown_keys(learn, "learn.", {"rounds", "min_support"});
    LearnSettings settings;
    if (learn.contains("rounds")) {
      settings.rounds = as_integer(learn.at("rounds"), "learn.rounds");
      if (settings.rounds < 1) bad("config key learn.rounds: must be >= 1");
    }
    if (learn.contains("min_support")) {
      settings.min_support = as_integer(learn.at("min_support"), "learn.min_support");
      if (settings.min_support < 1) bad("config key learn.min_support: must be >= 1");
    }
    cfg.learn = settings;
  }
  return cfg;
}

void validate_for_task(const GenConfig& cfg, TaskKind task) {
  if (task == TaskKind::kSummarize) {
    if (cfg.budget_k < 1) bad("budget_k is required for summarize");
    if (cfg.learn) bad("learn is not supported for task summarize");
  }
  if (task == TaskKind::kKeywords && cfg.learn) {
    bad("learn is not supported for task keywords");
  }
  if (task == TaskKind::kStyle) {
    if (cfg.style_model_path.empty()) bad("style_model_path is required for task style");
    if (cfg.target_style.empty()) bad("target_style is required for task style");
  }
  for (const ComponentSpec& c : cfg.components) {
    if (c.name == "semantic" && cfg.embeddings_path.empty()) {
      bad("embeddings_path is required for the semantic component");
    }
    if (c.name == "length" && cfg.budget_k < 1) {
      bad("budget_k is required for the length component");
    }
    if (c.name == "style") {
      if (cfg.style_model_path.empty()) {
        bad("style_model_path is required for the style component");
      }
      if (cfg.target_style.empty()) {
        bad("target_style is required for the style component");
      }
    }
  }
}

TaskResources load_resources(const GenConfig& cfg, TaskKind task) {
  validate_for_task(cfg, task);
  TaskResources res;
  try {
    if (looks_like_lm_dump(cfg.lm_path)) {
      res.lm = NGramModel::load(cfg.lm_path);
    } else {
      res.lm = NGramModel::train(read_sentence_file(cfg.lm_path), kFallbackLmOrder);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    bad(std::string("lm_path: ") + e.what());
  }
  if (wants_component(cfg, "semantic")) {
    try {
      res.embeddings = EmbeddingTable::load(cfg.embeddings_path);
    } catch (const std::exception& e) {
      bad(std::string("embeddings_path: ") + e.what());
    }
  }
  if (wants_component(cfg, "style")) {
    try {
      res.style = StyleClassifier::train_from_file(cfg.style_model_path, kStyleAlpha);
    } catch (const std::exception& e) {
      bad(std::string("style_model_path: ") + e.what());
    }
    const std::vector<std::string>& labels = res.style->labels();
    if (std::find(labels.begin(), labels.end(), cfg.target_style) == labels.end()) {
      bad("target_style: unknown style label: " + cfg.target_style);
    }
  }
  return res;
}

Objective build_objective(const GenConfig& cfg, const TaskResources& res,
                          const std::vector<Token>& keywords) {
  Objective o;
  for (const ComponentSpec& spec : cfg.components) {
    ObjectiveComponent c;
    c.name = spec.name;
    c.weight = spec.weight;
    if (spec.name == "fluency") {
      const NGramModel* lm = &*res.lm;
      c.scorer = [lm](const Sentence& y, const Sentence&) { return lm->fluency_score(y); };
    } else if (spec.name == "semantic") {
      const EmbeddingTable* table = &*res.embeddings;
      SemanticParams params = spec.semantic;
      c.scorer = [table, params, keywords](const Sentence& y, const Sentence& x) {
        return semantic_score(*table, y, x, keywords, params);
      };
    } else if (spec.name == "keyword") {
      c.scorer = [keywords](const Sentence& y, const Sentence&) {
        return static_cast<double>(keyword_indicator(y, keywords));
      };
    } else if (spec.name == "length") {
      int budget = cfg.budget_k;
      c.scorer = [budget](const Sentence& y, const Sentence&) {
        return static_cast<double>(length_indicator(y, budget));
      };
    } else if (spec.name == "diversity") {
      int max_n = spec.max_n;
      c.scorer = [max_n](const Sentence& y, const Sentence& x) {
        return diversity_score(y, x, max_n);
      };
    } else if (spec.name == "flesch") {
      c.scorer = [](const Sentence& y, const Sentence&) { return flesch_score(y); };
    } else {
      const StyleClassifier* style = &*res.style;
      std::string target = cfg.target_style;
      c.scorer = [style, target](const Sentence& y, const Sentence&) {
        return style->style_score(y, target);
      };
    }
    o.components.push_back(std::move(c));
  }
  return o;
}

GenerationOutcome run_generation(const GenConfig& cfg, TaskKind task,
                                 const TaskResources& res,
                                 const std::vector<std::string>& input_lines,
                                 std::uint64_t base_seed, BatchMode mode) {
  validate_for_task(cfg, task);

  std::vector<std::string> lines;
  std::vector<Sentence> xs;
  for (const std::string& line : input_lines) {
    Sentence x = tokenize(line);
    if (x.empty()) continue;
    lines.push_back(line);
    xs.push_back(std::move(x));
  }

  SearchConfig search = cfg.search;
  search.seed = base_seed;

  std::vector<SearchResult> results;
  if (task == TaskKind::kSummarize) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (eligible_word_count(xs[i]) <= cfg.budget_k) {
        bad("input line " + std::to_string(i + 1) +
            ": summarize needs more than budget_k non-punctuation words");
      }
    }
    Objective o = build_objective(cfg, res, {});
    results = run_batch(
        xs.size(), base_seed,
        [&](std::size_t i, std::uint64_t seed) {
          SearchConfig per = search;
          per.seed = seed;
          return run_selection_search(o, xs[i], cfg.budget_k, per);
        },
        mode);
  } else if (cfg.learn) {
    Objective o = build_objective(cfg, res, {});
    AlternationOutcome alt = alternate(xs, o, *res.lm, search, cfg.learn->rounds,
                                       cfg.learn->min_support, mode);
    results = std::move(alt.rounds.back().results);
  } else if (task == TaskKind::kKeywords) {
    results = run_batch(
        xs.size(), base_seed,
        [&](std::size_t i, std::uint64_t seed) {
          Objective o = build_objective(cfg, res, xs[i].tokens);
          SearchConfig per = search;
          per.seed = seed;
          return run_word_search(o, xs[i], xs[i], *res.lm, per);
        },
        mode);
  } else {
    Objective o = build_objective(cfg, res, {});
    results = run_batch(
        xs.size(), base_seed,
        [&](std::size_t i, std::uint64_t seed) {
          SearchConfig per = search;
          per.seed = seed;
          return run_word_search(o, xs[i], xs[i], *res.lm, per);
        },
        mode);
  }

  GenerationOutcome outcome;
  outcome.records.reserve(results.size());
  outcome.traces.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    GenerationRecord record;
    record.input = lines[i];
    record.output = results[i].output;
    record.log_score = results[i].output_log_score;
    record.init_log_score = results[i].init_log_score;
    record.iterations = static_cast<int>(results[i].trace.size());
    outcome.records.push_back(std::move(record));
    outcome.traces.push_back(std::move(results[i].trace));
  }
  return outcome;
}

}  // namespace salt
