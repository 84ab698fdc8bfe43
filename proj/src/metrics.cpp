#include "salt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace salt {

namespace {

// Joiner byte that cannot appear inside a token (tokens are visible text).
constexpr char kJoin = '\x1f';

std::map<std::string, int> ngram_counts(const Sentence& s, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
    std::string key = s.tokens[i];
    for (int j = 1; j < n; ++j) {
      key += kJoin;
      key += s.tokens[i + static_cast<std::size_t>(j)];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double bleu(const Sentence& candidate, const std::vector<Sentence>& references,
            int max_n, double smoothing_eps) {
  if (max_n < 1 || max_n > 4) throw std::invalid_argument("max_n must be in [1,4]");
  if (references.empty()) throw std::invalid_argument("references must be non-empty");
  if (candidate.empty()) return 0.0;

  double log_precision_sum = 0.0;
  int orders_used = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::string, int> cand = ngram_counts(candidate, n);
    if (cand.empty()) continue;  // candidate too short for this order
    std::map<std::string, int> clip;
    for (const Sentence& ref : references) {
      for (const auto& [gram, count] : ngram_counts(ref, n)) {
        auto [it, inserted] = clip.emplace(gram, count);
        if (!inserted) it->second = std::max(it->second, count);
      }
    }
    long matched = 0;
    long total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      auto it = clip.find(gram);
      if (it != clip.end()) matched += std::min(count, it->second);
    }
    double precision = matched > 0
                           ? static_cast<double>(matched) / static_cast<double>(total)
                           : smoothing_eps;
    log_precision_sum += std::log(precision);
    ++orders_used;
  }
  if (orders_used == 0) return 0.0;
  double geo_mean = std::exp(log_precision_sum / static_cast<double>(orders_used));

  // Closest reference length, ties to the shorter.
  long c = static_cast<long>(candidate.size());
  long r = static_cast<long>(references.front().size());
  for (const Sentence& ref : references) {
    long len = static_cast<long>(ref.size());
    if (std::labs(len - c) < std::labs(r - c) ||
        (std::labs(len - c) == std::labs(r - c) && len < r)) {
      r = len;
    }
  }
  double bp = c >= r ? 1.0
                     : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * geo_mean;
}

double ibleu(const Sentence& output, const Sentence& reference, const Sentence& input,
             double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  return alpha * bleu(output, {reference}) - (1.0 - alpha) * bleu(output, {input});
}

CorpusEval corpus_eval(const std::vector<Sentence>& inputs,
                       const std::vector<Sentence>& outputs,
                       const std::vector<Sentence>& references, double alpha) {
  if (inputs.size() != outputs.size() || outputs.size() != references.size()) {
    throw std::invalid_argument("line count mismatch");
  }
  if (outputs.empty()) throw std::invalid_argument("empty corpora");

  CorpusEval eval;
  eval.n = outputs.size();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    eval.bleu += bleu(outputs[i], {references[i]});
    eval.ibleu += ibleu(outputs[i], references[i], inputs[i], alpha);
  }
  eval.bleu /= static_cast<double>(eval.n);
  eval.ibleu /= static_cast<double>(eval.n);
  return eval;
}

}  // namespace salt
