#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "salt/text.hpp"

namespace salt {

/// 1 iff every keyword appears as a token of y.
int keyword_indicator(const Sentence& y, const std::vector<Token>& keywords);

/// 1 iff the non-punctuation token count of y is within the budget.
int length_indicator(const Sentence& y, int budget_k);

/// 1 minus the geometric mean of clipped n-gram precisions of y against x
/// (n = 1..max_n, no brevity penalty), floored so the score stays positive.
double diversity_score(const Sentence& y, const Sentence& x, int max_n);

/// Maximal vowel groups (aeiouy), minus one for a trailing silent 'e'
/// (ends in 'e' but not 'le', and has at least two groups); at least 1.
int syllable_count(const Token& word);

/// Flesch reading ease of the single sentence y, clamped to [0,100] and
/// rescaled to (0,1]. Throws "unreadable input" when y has no alphabetic token.
double flesch_score(const Sentence& y);

/// Multinomial bag-of-tokens classifier over style labels with add-alpha
/// smoothing. Immutable after train.
class StyleClassifier {
 public:
  /// Requires at least two distinct labels and alpha > 0.
  static StyleClassifier train(
      const std::vector<std::pair<Sentence, std::string>>& labeled, double alpha);

  /// Reads "label<TAB>sentence" lines and trains on them.
  static StyleClassifier train_from_file(const std::string& path, double alpha);

  /// Posterior P(target | y); throws on an unknown label.
  double style_score(const Sentence& y, const std::string& target) const;

  /// Posterior over all labels; sums to 1.
  std::map<std::string, double> posteriors(const Sentence& y) const;

  const std::vector<std::string>& labels() const { return labels_; }
  double smoothing_alpha() const { return alpha_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> label_log_priors_;
  // token_log_lik_[label][token id]
  std::vector<std::vector<double>> token_log_lik_;
  Vocabulary vocab_;
  double alpha_ = 1.0;
};

}  // namespace salt
