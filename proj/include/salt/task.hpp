#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "salt/batch.hpp"
#include "salt/embedding.hpp"
#include "salt/learn.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/scorers.hpp"
#include "salt/search.hpp"
#include "salt/text.hpp"

namespace salt {

enum class TaskKind { kParaphrase, kSummarize, kKeywords, kCorrect, kStyle };

/// Maps a CLI task name; throws std::invalid_argument on an unknown name.
TaskKind parse_task(const std::string& name);

/// One scorer requested by the config's components list.
struct ComponentSpec {
  std::string name;  // fluency|semantic|keyword|length|diversity|flesch|style
  double weight = 1.0;
  SemanticParams semantic;  // "semantic" params (beta, gamma)
  int max_n = 4;            // "diversity" param
};

struct LearnSettings {
  int rounds = 2;
  int min_support = 2;
};

struct GenConfig {
  SearchConfig search;  // seed is supplied by the caller, not the config
  std::vector<ComponentSpec> components;
  std::string lm_path;
  std::string embeddings_path;
  int budget_k = 0;  // 0 = absent
  std::string style_model_path;
  std::string target_style;
  std::optional<LearnSettings> learn;
};

/// Parses and validates the generation config JSON. Unknown keys anywhere in
/// the document are rejected by name. All failures throw
/// std::invalid_argument with a message naming the offending key.
GenConfig parse_gen_config(const std::string& json_text);

/// Task-dependent requirements that key presence alone cannot express
/// (budget for summarize, style resources, which tasks support learning).
void validate_for_task(const GenConfig& cfg, TaskKind task);

/// Models referenced by the config. Only the resources some component (or the
/// task) actually uses are loaded.
struct TaskResources {
  std::optional<NGramModel> lm;
  std::optional<EmbeddingTable> embeddings;
  std::optional<StyleClassifier> style;
};

/// Loads the LM (a model dump, or a raw corpus to train on, detected by the
/// dump header), embeddings, and style classifier as needed. Load failures
/// become std::invalid_argument naming the config key.
TaskResources load_resources(const GenConfig& cfg, TaskKind task);

/// Objective for one input. keywords feed both the keyword indicator and the
/// semantic keyword factor; pass empty outside the keywords task. The result
/// borrows cfg and res, which must outlive it.
Objective build_objective(const GenConfig& cfg, const TaskResources& res,
                          const std::vector<Token>& keywords);

struct GenerationRecord {
  std::string input;  // raw input line as read
  Sentence output;
  double log_score = 0.0;
  double init_log_score = 0.0;
  int iterations = 0;
};

struct GenerationOutcome {
  std::vector<GenerationRecord> records;
  std::vector<SearchTrace> traces;  // parallel to records
};

/// Runs the task over raw input lines (blank lines are skipped), one search
/// per line with seed base_seed + index. Word tasks start from the tokenized
/// line itself — for keywords that is the keywords joined in order, which
/// satisfies the hard constraint at init. Summarize searches selection masks.
/// When cfg.learn is set, rounds of search-and-learn alternation run over the
/// whole batch and the final round is reported.
GenerationOutcome run_generation(const GenConfig& cfg, TaskKind task,
                                 const TaskResources& res,
                                 const std::vector<std::string>& input_lines,
                                 std::uint64_t base_seed,
                                 BatchMode mode = BatchMode::kSerial);

}  // namespace salt
