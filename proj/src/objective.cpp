#include "salt/objective.hpp"

#include <stdexcept>

namespace salt {

double evaluate_log_score(const Objective& o, const Sentence& y, const Sentence& x) {
  if (o.components.empty()) throw std::logic_error("objective has no components");
  double total = 0.0;
  for (const ObjectiveComponent& c : o.components) {
    double score = 0.0;
    try {
      score = c.scorer(y, x);
    } catch (const std::exception& e) {
      throw std::runtime_error("component '" + c.name + "': " + e.what());
    }
    double log_score = score > 0.0 ? std::log(score) : o.hard_floor_log;
    total += c.weight * log_score;
  }
  return total;
}

}  // namespace salt
