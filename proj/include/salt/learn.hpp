#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "salt/batch.hpp"
#include "salt/search.hpp"
#include "salt/text.hpp"

namespace salt {

enum class AlignOpKind { kMatch, kReplace, kInsert, kDelete };

/// One step of a token-level alignment path. input_pos is the 0-based input
/// index for match/replace/delete and the insertion slot (before that input
/// position) for insert.
struct AlignOp {
  AlignOpKind kind = AlignOpKind::kMatch;
  int input_pos = 0;
  Token from;  // input token consumed; empty for insert
  Token to;    // output token produced; empty for delete
  bool operator==(const AlignOp&) const = default;
};

/// Minimal edit-distance alignment (unit costs), replace preferred over
/// delete+insert on ties. Applying the script to input reproduces output.
std::vector<AlignOp> align(const Sentence& input, const Sentence& output);

/// Replays a script against its input; throws std::invalid_argument when the
/// script's consumed tokens do not match the input.
Sentence apply_script(const Sentence& input, const std::vector<AlignOp>& script);

struct RuleTarget {
  Token word;
  std::int64_t count = 0;
  bool operator==(const RuleTarget&) const = default;
};

/// Token-substitution rules pooled from (input, search-output) pairs:
/// replace rules keyed by (previous input token, source token) and insertion
/// rules keyed by the adjacent input-token pair, with sentence boundaries
/// written as the BOS/EOS surfaces. Ranked lists are sorted by count
/// descending, ties by token text ascending.
class SubstitutionModel {
 public:
  using Key = std::pair<Token, Token>;  // (context, source) / (left, right)

  bool empty() const { return replace_rules_.empty() && insert_rules_.empty(); }
  std::size_t replace_rule_count() const { return replace_rules_.size(); }
  std::size_t insert_rule_count() const { return insert_rules_.size(); }

  /// Ranked targets for a replace key, or nullptr when the rule is absent.
  const std::vector<RuleTarget>* replace_targets(const Token& context,
                                                 const Token& source) const;
  /// Ranked targets for an insertion slot, or nullptr.
  const std::vector<RuleTarget>* insert_targets(const Token& left,
                                                const Token& right) const;

  /// One left-to-right pass over x: at each position the highest-count
  /// applicable replace rule (at most one edit per position), and at each of
  /// the n+1 slots the highest-count applicable insertion rule. Contexts are
  /// read from the original x, matching how rules were learned. An empty
  /// model returns x unchanged; a non-empty input never becomes empty.
  Sentence initial_candidate(const Sentence& x) const;

  /// Text dump, one rule per line:
  ///   REPL<TAB>context<TAB>source<TAB>target<TAB>count
  ///   INS<TAB>left<TAB>right<TAB>word<TAB>count
  void save(const std::string& path) const;
  static SubstitutionModel load(const std::string& path);

  friend SubstitutionModel learn_from_search(
      const std::vector<std::pair<Sentence, Sentence>>& pairs, int min_support);

 private:
  std::map<Key, std::vector<RuleTarget>> replace_rules_;
  std::map<Key, std::vector<RuleTarget>> insert_rules_;
};

/// Aligns each pair, accumulates rules from the replace and insert steps, and
/// drops rules whose count falls below min_support. Deletions produce no
/// rules. Throws on empty pairs.
SubstitutionModel learn_from_search(
    const std::vector<std::pair<Sentence, Sentence>>& pairs, int min_support);

struct RoundResult {
  std::vector<SearchResult> results;
  double mean_log_score = 0.0;
};

struct AlternationOutcome {
  SubstitutionModel model;  // the model used for the last round's inits
  std::vector<RoundResult> rounds;
};

/// Search-and-learn alternation. Round 1 searches from input copies; each
/// later round learns a SubstitutionModel from the previous round's
/// (input, best output) pairs and searches from that model's initial
/// candidates. Every round reuses the same per-input seeds (cfg.seed + index),
/// so rounds differ only through their initial states.
AlternationOutcome alternate(const std::vector<Sentence>& inputs, const Objective& o,
                             const NGramModel& lm, const SearchConfig& cfg,
                             int rounds, int min_support,
                             BatchMode mode = BatchMode::kSerial);

}  // namespace salt
