#include "salt/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace salt {

namespace {

constexpr double kScoreFloor = 1e-6;
constexpr double kPrecisionEps = 1e-9;

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

std::unordered_map<std::string, int> ngram_counts(const Sentence& s, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      key += s.tokens[i + static_cast<std::size_t>(j)];
      key.push_back('\x1f');
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

int keyword_indicator(const Sentence& y, const std::vector<Token>& keywords) {
  for (const Token& k : keywords) {
    if (std::find(y.tokens.begin(), y.tokens.end(), k) == y.tokens.end()) return 0;
  }
  return 1;
}

int length_indicator(const Sentence& y, int budget_k) {
  if (budget_k < 1) throw std::invalid_argument("length budget must be >= 1");
  int words = 0;
  for (const Token& t : y.tokens) {
    if (!is_punctuation_token(t)) ++words;
  }
  return words <= budget_k ? 1 : 0;
}

double diversity_score(const Sentence& y, const Sentence& x, int max_n) {
  if (max_n < 1 || max_n > 4) throw std::invalid_argument("diversity max_n must be in [1,4]");
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    auto cand = ngram_counts(y, n);
    if (cand.empty()) continue;  // y too short for this order
    auto ref = ngram_counts(x, n);
    int total = 0, matched = 0;
    for (const auto& [gram, c] : cand) {
      total += c;
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(c, it->second);
    }
    double precision = total > 0 ? static_cast<double>(matched) / total : 0.0;
    if (precision <= 0.0) precision = kPrecisionEps;
    log_sum += std::log(precision);
    ++orders;
  }
  double overlap = orders > 0 ? std::exp(log_sum / orders) : 0.0;
  return std::clamp(1.0 - overlap, kScoreFloor, 1.0);
}

int syllable_count(const Token& word) {
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  bool silent_e = word.size() >= 2 && word.back() == 'e' &&
                  !(word.size() >= 2 && word[word.size() - 2] == 'l') &&
                  groups >= 2;
  if (silent_e) --groups;
  return std::max(groups, 1);
}

double flesch_score(const Sentence& y) {
  int words = 0;
  int syllables = 0;
  for (const Token& t : y.tokens) {
    if (!is_alphabetic_token(t)) continue;
    ++words;
    syllables += syllable_count(t);
  }
  if (words == 0) throw std::runtime_error("unreadable input");
  double w = static_cast<double>(words);
  double s = static_cast<double>(syllables);
  double raw = 206.835 - 1.015 * w - 84.6 * (s / w);
  double clamped = std::clamp(raw, 0.0, 100.0) / 100.0;
  return std::max(clamped, kScoreFloor);
}

StyleClassifier StyleClassifier::train(
    const std::vector<std::pair<Sentence, std::string>>& labeled, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("smoothing alpha must be > 0");

  StyleClassifier c;
  c.alpha_ = alpha;
  std::map<std::string, int> label_counts;
  for (const auto& [sentence, label] : labeled) {
    ++label_counts[label];
    for (const Token& t : sentence.tokens) c.vocab_.add(t);
  }
  if (label_counts.size() < 2) throw std::runtime_error("need at least two styles");

  for (const auto& [label, n] : label_counts) {
    c.labels_.push_back(label);
    c.label_log_priors_.push_back(
        std::log(static_cast<double>(n) / static_cast<double>(labeled.size())));
  }

  int v = c.vocab_.size();
  c.token_log_lik_.assign(c.labels_.size(), std::vector<double>(static_cast<std::size_t>(v), 0.0));
  std::vector<std::vector<std::int64_t>> counts(
      c.labels_.size(), std::vector<std::int64_t>(static_cast<std::size_t>(v), 0));
  std::vector<std::int64_t> totals(c.labels_.size(), 0);
  auto label_index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::find(c.labels_.begin(), c.labels_.end(), label) - c.labels_.begin());
  };
  for (const auto& [sentence, label] : labeled) {
    std::size_t li = label_index(label);
    for (const Token& t : sentence.tokens) {
      ++counts[li][static_cast<std::size_t>(c.vocab_.id(t))];
      ++totals[li];
    }
  }
  for (std::size_t li = 0; li < c.labels_.size(); ++li) {
    double denom = static_cast<double>(totals[li]) + alpha * static_cast<double>(v);
    for (int w = 0; w < v; ++w) {
      c.token_log_lik_[li][static_cast<std::size_t>(w)] =
          std::log((static_cast<double>(counts[li][static_cast<std::size_t>(w)]) + alpha) / denom);
    }
  }
  return c;
}

StyleClassifier StyleClassifier::train_from_file(const std::string& path, double alpha) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open style corpus: " + path);
  std::vector<std::pair<Sentence, std::string>> labeled;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("style corpus line missing tab separator: " + line);
    }
    labeled.emplace_back(tokenize(line.substr(tab + 1)), line.substr(0, tab));
  }
  return train(labeled, alpha);
}

std::map<std::string, double> StyleClassifier::posteriors(const Sentence& y) const {
  std::vector<double> log_post(labels_.size());
  for (std::size_t li = 0; li < labels_.size(); ++li) {
    double lp = label_log_priors_[li];
    for (const Token& t : y.tokens) {
      lp += token_log_lik_[li][static_cast<std::size_t>(vocab_.id(t))];
    }
    log_post[li] = lp;
  }
  double max_lp = *std::max_element(log_post.begin(), log_post.end());
  double z = 0.0;
  for (double lp : log_post) z += std::exp(lp - max_lp);
  std::map<std::string, double> out;
  for (std::size_t li = 0; li < labels_.size(); ++li) {
    out[labels_[li]] = std::exp(log_post[li] - max_lp) / z;
  }
  return out;
}

double StyleClassifier::style_score(const Sentence& y, const std::string& target) const {
  if (std::find(labels_.begin(), labels_.end(), target) == labels_.end()) {
    throw std::runtime_error("unknown style label: " + target);
  }
  return posteriors(y).at(target);
}

}  // namespace salt
