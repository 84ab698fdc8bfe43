#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "salt/edit.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/text.hpp"

namespace salt {

enum class Algorithm { kMetropolisHastings, kSimulatedAnnealing, kHillClimb };

struct SearchConfig {
  Algorithm algorithm = Algorithm::kSimulatedAnnealing;
  int iterations = 200;
  double t0 = 1.0;
  double cooling_rate = 1.0 / 200;  // per-step linear decrement; default T0/iterations
  double t_min = 1e-3;
  std::uint64_t seed = 0;
  int shortlist_k = 50;
  EditOps enabled_ops;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  /// Annealing schedule: max(T0 - cooling_rate * step, T_min).
  double temperature(int step) const;
};

/// One search step, kept whether or not the proposal was accepted.
/// log_score is the score of the state *after* the accept/reject decision;
/// candidate is the proposed state regardless of the decision.
struct TraceStep {
  int step = 0;
  std::string op;
  bool accepted = false;
  double log_score = 0.0;
  double temperature = 0.0;
  Sentence candidate;
};

using SearchTrace = std::vector<TraceStep>;

struct SearchResult {
  Sentence output;
  double output_log_score = 0.0;
  double init_log_score = 0.0;
  SearchTrace trace;
  /// 0 when the initial state was never beaten; otherwise 1-based index of
  /// the earliest step whose accepted state attains the final best score.
  int first_best_step = 0;
};

/// Annealing accept rule: true with probability min(1, exp(delta / temperature)).
/// Improving moves accept without consuming randomness.
bool accept_annealing(double delta, double temperature, std::mt19937_64& rng);

/// Metropolis-Hastings accept rule:
/// true with probability min(1, exp(delta + backward_log_prob - forward_log_prob)).
bool accept_metropolis(double delta, double forward_log_prob,
                       double backward_log_prob, std::mt19937_64& rng);

/// A search space binds a state type to scoring, proposal, and rendering.
template <typename S>
concept SearchSpace = requires(const S& space, const typename S::State& state,
                               std::mt19937_64& rng) {
  typename S::State;
  { space.log_score(state) } -> std::convertible_to<double>;
  { space.propose(state, rng) } ->
      std::convertible_to<std::pair<EditProposal, typename S::State>>;
  { space.to_sentence(state) } -> std::convertible_to<Sentence>;
};

/// Propose-and-accept loop shared by all three algorithms. Runs exactly
/// cfg.iterations steps, records every proposal in the trace, and returns the
/// best state visited (the initial state counts; ties go to the earliest).
template <SearchSpace Space>
SearchResult run_search(const Space& space, const typename Space::State& init,
                        const SearchConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  typename Space::State current = init;
  double current_ls = space.log_score(current);

  SearchResult result;
  result.init_log_score = current_ls;
  result.trace.reserve(static_cast<std::size_t>(cfg.iterations));

  typename Space::State best = current;
  double best_ls = current_ls;

  for (int t = 0; t < cfg.iterations; ++t) {
    auto [proposal, candidate] = space.propose(current, rng);
    double candidate_ls = space.log_score(candidate);
    double delta = candidate_ls - current_ls;

    double temperature = 1.0;
    bool accepted = false;
    switch (cfg.algorithm) {
      case Algorithm::kSimulatedAnnealing:
        temperature = cfg.temperature(t);
        accepted = accept_annealing(delta, temperature, rng);
        break;
      case Algorithm::kMetropolisHastings:
        accepted = accept_metropolis(delta, proposal.forward_log_prob,
                                     proposal.backward_log_prob, rng);
        break;
      case Algorithm::kHillClimb:
        temperature = 0.0;
        accepted = delta > 0.0;
        break;
    }

    Sentence rendered = space.to_sentence(candidate);
    if (accepted) {
      current = std::move(candidate);
      current_ls = candidate_ls;
      if (current_ls > best_ls) {
        best = current;
        best_ls = current_ls;
        result.first_best_step = t + 1;
      }
    }
    result.trace.push_back(TraceStep{t, summarize(proposal), accepted, current_ls,
                                     temperature, std::move(rendered)});
  }

  result.output = space.to_sentence(best);
  result.output_log_score = best_ls;
  return result;
}

/// States are sentences; proposals are LM-shortlisted word edits.
class WordEditSpace {
 public:
  using State = Sentence;

  WordEditSpace(const Objective& o, const Sentence& x, const NGramModel& lm,
                EditConfig config)
      : objective_(&o), x_(&x), lm_(&lm), config_(config) {}

  double log_score(const Sentence& y) const {
    return evaluate_log_score(*objective_, y, *x_);
  }
  std::pair<EditProposal, Sentence> propose(const Sentence& y,
                                            std::mt19937_64& rng) const {
    return propose_edit(*objective_, y, *x_, *lm_, rng, config_);
  }
  const Sentence& to_sentence(const Sentence& y) const { return y; }

 private:
  const Objective* objective_;
  const Sentence* x_;
  const NGramModel* lm_;
  EditConfig config_;
};

/// States are budget-preserving selection masks over the input; proposals are
/// selected/unselected swaps.
class SelectionSpace {
 public:
  using State = SelectionMask;

  SelectionSpace(const Objective& o, const Sentence& x)
      : objective_(&o), x_(&x) {}

  double log_score(const SelectionMask& m) const {
    return evaluate_log_score(*objective_, m.realize(), *x_);
  }
  std::pair<EditProposal, SelectionMask> propose(const SelectionMask& m,
                                                 std::mt19937_64& rng) const {
    return propose_swap(m, rng);
  }
  Sentence to_sentence(const SelectionMask& m) const { return m.realize(); }

 private:
  const Objective* objective_;
  const Sentence* x_;
};

/// Word-edit search with the algorithm named by cfg.algorithm.
SearchResult run_word_search(const Objective& o, const Sentence& init,
                             const Sentence& x, const NGramModel& lm,
                             const SearchConfig& cfg);

/// The named drivers insist on the matching cfg.algorithm.
SearchResult simulated_annealing(const Objective& o, const Sentence& init,
                                 const Sentence& x, const NGramModel& lm,
                                 const SearchConfig& cfg);
SearchResult hill_climb(const Objective& o, const Sentence& init, const Sentence& x,
                        const NGramModel& lm, const SearchConfig& cfg);
SearchResult metropolis_hastings(const Objective& o, const Sentence& init,
                                 const Sentence& x, const NGramModel& lm,
                                 const SearchConfig& cfg);

/// Extractive search over selection masks, starting from the first budget_k
/// non-punctuation words of x.
SearchResult run_selection_search(const Objective& o, const Sentence& x,
                                  int budget_k, const SearchConfig& cfg);

}  // namespace salt
