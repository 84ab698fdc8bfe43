#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/text.hpp"

namespace salt {

enum class EditKind { kReplace, kInsert, kDelete, kSwapSelection };

/// One local edit together with its proposal probabilities under the scheme
/// that generated it, so Metropolis-Hastings ratios are well-defined.
struct EditProposal {
  EditKind kind = EditKind::kReplace;
  int position = 0;
  int position2 = -1;  // second index for SwapSelection
  std::optional<Token> word;
  double forward_log_prob = 0.0;
  double backward_log_prob = 0.0;
};

std::string summarize(const EditProposal& e);

struct EditOps {
  bool replace = true;
  bool insert = true;
  bool erase = true;

  bool any() const { return replace || insert || erase; }
};

struct EditConfig {
  int shortlist_k = 50;
  EditOps enabled;
};

/// Probability over the shortlist proportional to exp(log-score of the
/// sentence with that word placed at the position). Sums to 1.
std::vector<double> gibbs_word_distribution(const Objective& o, const Sentence& y,
                                            const Sentence& x, int position,
                                            EditKind mode,
                                            const std::vector<Token>& shortlist);

/// Draws an edit: kind uniform over the applicable enabled operations,
/// position uniform over valid slots, and for replace/insert a word from the
/// Gibbs distribution over the LM shortlist (reserved symbols excluded).
/// Backward probability is that of the exact reverse edit under the same
/// scheme; an unreachable reverse uses the 1e-12 floor.
/// Deletion is never applicable at length 1, keeping search states non-empty.
std::pair<EditProposal, Sentence> propose_edit(const Objective& o, const Sentence& y,
                                               const Sentence& x, const NGramModel& lm,
                                               std::mt19937_64& rng,
                                               const EditConfig& config);

/// Applies a word edit; throws on an out-of-range position.
Sentence apply_edit(const Sentence& y, const EditProposal& e);

/// Extractive summary state: which source words are currently selected.
/// Punctuation positions are never eligible, so a realized summary always has
/// exactly budget_k words.
struct SelectionMask {
  Sentence source;
  std::vector<char> selected;
  std::vector<char> eligible;
  int budget_k = 0;

  /// Selects the first budget_k non-punctuation words.
  /// Requires 0 < budget_k < eligible word count.
  static SelectionMask first_k(const Sentence& source, int budget_k);

  /// Selected tokens in source order.
  Sentence realize() const;

  int eligible_count() const;
  bool operator==(const SelectionMask&) const = default;
};

/// Swaps the selection of one selected and one unselected word, both chosen
/// uniformly. The proposal is symmetric and preserves the budget.
std::pair<EditProposal, SelectionMask> propose_swap(const SelectionMask& mask,
                                                    std::mt19937_64& rng);

}  // namespace salt
