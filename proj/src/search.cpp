#include "salt/search.hpp"

#include <cmath>
#include <stdexcept>

namespace salt {

void SearchConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (t0 <= 0.0) throw std::invalid_argument("T0 must be positive");
  if (t_min <= 0.0) throw std::invalid_argument("T_min must be positive");
  if (t_min > t0) throw std::invalid_argument("T_min must not exceed T0");
  if (cooling_rate < 0.0) throw std::invalid_argument("cooling_rate must be non-negative");
  if (shortlist_k < 1) throw std::invalid_argument("shortlist_K must be >= 1");
}

double SearchConfig::temperature(int step) const {
  return std::max(t0 - cooling_rate * static_cast<double>(step), t_min);
}

bool accept_annealing(double delta, double temperature, std::mt19937_64& rng) {
  if (delta >= 0.0) return true;
  double p = std::exp(delta / temperature);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

bool accept_metropolis(double delta, double forward_log_prob,
                       double backward_log_prob, std::mt19937_64& rng) {
  double log_ratio = delta + backward_log_prob - forward_log_prob;
  if (log_ratio >= 0.0) return true;
  double p = std::exp(log_ratio);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

namespace {

EditConfig edit_config_of(const SearchConfig& cfg) {
  EditConfig ec;
  ec.shortlist_k = cfg.shortlist_k;
  ec.enabled = cfg.enabled_ops;
  return ec;
}

SearchResult run_named(const Objective& o, const Sentence& init, const Sentence& x,
                       const NGramModel& lm, const SearchConfig& cfg,
                       Algorithm expected, const char* name) {
  if (cfg.algorithm != expected) {
    throw std::invalid_argument(std::string(name) + " requires the matching algorithm in cfg");
  }
  return run_word_search(o, init, x, lm, cfg);
}

}  // namespace

SearchResult run_word_search(const Objective& o, const Sentence& init,
                             const Sentence& x, const NGramModel& lm,
                             const SearchConfig& cfg) {
  WordEditSpace space(o, x, lm, edit_config_of(cfg));
  return run_search(space, init, cfg);
}

SearchResult simulated_annealing(const Objective& o, const Sentence& init,
                                 const Sentence& x, const NGramModel& lm,
                                 const SearchConfig& cfg) {
  return run_named(o, init, x, lm, cfg, Algorithm::kSimulatedAnnealing,
                   "simulated_annealing");
}

SearchResult hill_climb(const Objective& o, const Sentence& init, const Sentence& x,
                        const NGramModel& lm, const SearchConfig& cfg) {
  return run_named(o, init, x, lm, cfg, Algorithm::kHillClimb, "hill_climb");
}

SearchResult metropolis_hastings(const Objective& o, const Sentence& init,
                                 const Sentence& x, const NGramModel& lm,
                                 const SearchConfig& cfg) {
  return run_named(o, init, x, lm, cfg, Algorithm::kMetropolisHastings,
                   "metropolis_hastings");
}

SearchResult run_selection_search(const Objective& o, const Sentence& x,
                                  int budget_k, const SearchConfig& cfg) {
  SelectionSpace space(o, x);
  return run_search(space, SelectionMask::first_k(x, budget_k), cfg);
}

}  // namespace salt
