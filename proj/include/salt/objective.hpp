#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "salt/text.hpp"

namespace salt {

/// One positive scorer with its weight (an exponent on the product form).
struct ObjectiveComponent {
  std::string name;
  std::function<double(const Sentence& y, const Sentence& x)> scorer;
  double weight = 1.0;
};

/// Weighted multiplicative composition of positive scorers, evaluated in the
/// log domain. A component that returns 0 contributes hard_floor_log instead
/// of -inf, so search can traverse states that violate a hard constraint
/// without ever letting them win best-so-far.
struct Objective {
  std::vector<ObjectiveComponent> components;
  double hard_floor_log = std::log(1e-8);
};

/// Sum of weight * log(score) over components; always finite.
/// A throwing component propagates with its name attached.
double evaluate_log_score(const Objective& o, const Sentence& y, const Sentence& x);

}  // namespace salt
