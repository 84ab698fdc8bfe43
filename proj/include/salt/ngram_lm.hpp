#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "salt/text.hpp"

namespace salt {

/// Backoff n-gram language model over a task corpus.
///
/// Scoring is stupid backoff: the maximum-likelihood estimate at the longest
/// seen context, with a fixed multiplicative penalty per backoff level,
/// terminating at an add-one-smoothed unigram. Raw backoff scores are
/// normalized per context (normalizers are precomputed at training time), so
/// word_prob sums to 1 over the prediction vocabulary for every context and
/// sentence_log_prob is a proper log-probability.
///
/// Immutable after train/load; safe to share across concurrent searches.
class NGramModel {
 public:
  static constexpr int kMaxOrder = 5;
  static constexpr double kDefaultBackoff = 0.4;

  /// Counts all k-grams (k <= order) over BOS-padded, EOS-terminated
  /// sentences. Tokens rarer than min_count are mapped to UNK before
  /// counting. Throws on an empty corpus or an order outside [1,5].
  static NGramModel train(const std::vector<Sentence>& corpus, int order,
                          int min_count = 1,
                          double backoff_factor = kDefaultBackoff);

  int order() const { return order_; }
  double backoff_factor() const { return backoff_; }
  const Vocabulary& vocab() const { return vocab_; }

  /// Token ids for LM lookups. Unknown tokens and reserved surfaces map to UNK.
  std::vector<std::int32_t> ids_of(const Sentence& s) const;

  /// P(word | context), in (0, 1]. The context may be any length; only the
  /// last order-1 ids are used. BOS is not a predictable word.
  double word_prob(std::span<const std::int32_t> context, std::int32_t word) const;

  /// Natural-log probability of the sentence including the EOS transition.
  double sentence_log_prob(const Sentence& y) const;

  /// Per-token geometric mean probability, exp(log_prob / (|y|+1)); in (0,1].
  double fluency_score(const Sentence& y) const;

  /// The k ids (BOS excluded) maximizing
  ///   P(w | left context) * P(next | context ending in w),
  /// where next is the first right-context id, or EOS when right is empty.
  /// Ties break by id.
  std::vector<std::int32_t> candidate_words(std::span<const std::int32_t> left,
                                            std::span<const std::int32_t> right,
                                            int k) const;

  std::int64_t count(std::span<const std::int32_t> ngram) const;
  std::int64_t context_total(std::span<const std::int32_t> context) const;
  std::size_t distinct_ngrams() const { return counts_.size(); }
  std::int64_t trained_tokens() const { return trained_tokens_; }

  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

 private:
  struct Key {
    std::array<std::int32_t, kMaxOrder> ids{};
    std::uint8_t len = 0;
    static Key of(std::span<const std::int32_t> s);
    Key suffix() const;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  NGramModel() = default;
  void finalize();
  double raw_score(std::span<const std::int32_t> context, std::int32_t word) const;
  double addone_unigram(std::int32_t word) const;

  int order_ = 1;
  double backoff_ = kDefaultBackoff;
  Vocabulary vocab_;
  std::unordered_map<Key, std::int64_t, KeyHash> counts_;
  std::unordered_map<Key, std::int64_t, KeyHash> context_totals_;
  std::unordered_map<Key, std::vector<std::int32_t>, KeyHash> continuations_;
  std::unordered_map<Key, double, KeyHash> normalizers_;
  std::int64_t unigram_total_ = 0;  // non-BOS token occurrences incl. EOS
  std::int64_t trained_tokens_ = 0;
};

}  // namespace salt
