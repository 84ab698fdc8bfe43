#include "salt/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace salt {

NGramModel::Key NGramModel::Key::of(std::span<const std::int32_t> s) {
  Key k;
  k.len = static_cast<std::uint8_t>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) k.ids[i] = s[i];
  return k;
}

NGramModel::Key NGramModel::Key::suffix() const {
  Key k;
  if (len == 0) return k;
  k.len = static_cast<std::uint8_t>(len - 1);
  for (int i = 0; i < k.len; ++i) k.ids[i] = ids[i + 1];
  return k;
}

std::size_t NGramModel::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull ^ k.len;
  for (int i = 0; i < k.len; ++i) {
    h ^= static_cast<std::uint32_t>(k.ids[i]);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

NGramModel NGramModel::train(const std::vector<Sentence>& corpus, int order,
                             int min_count, double backoff_factor) {
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  if (order < 1 || order > kMaxOrder) throw std::runtime_error("unsupported order");
  if (!(backoff_factor > 0.0 && backoff_factor < 1.0)) {
    throw std::runtime_error("backoff factor must be in (0,1)");
  }

  NGramModel m;
  m.order_ = order;
  m.backoff_ = backoff_factor;

  std::unordered_map<Token, std::int64_t> freq;
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) ++freq[t];
  }

  auto is_reserved_surface = [](const Token& t) {
    return t == Vocabulary::kBosSurface || t == Vocabulary::kEosSurface ||
           t == Vocabulary::kUnkSurface;
  };

  // Token ids in first-appearance order; rare and reserved surfaces fold into UNK.
  auto resolve = [&](const Token& t) -> std::int32_t {
    if (is_reserved_surface(t) || freq[t] < min_count) return Vocabulary::kUnk;
    return m.vocab_.add(t);
  };

  for (const Sentence& s : corpus) {
    m.trained_tokens_ += static_cast<std::int64_t>(s.size());
    std::vector<std::int32_t> seq(static_cast<std::size_t>(order - 1), Vocabulary::kBos);
    seq.reserve(seq.size() + s.size() + 1);
    for (const Token& t : s.tokens) seq.push_back(resolve(t));
    seq.push_back(Vocabulary::kEos);
    for (int k = 1; k <= order; ++k) {
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= seq.size(); ++i) {
        std::span<const std::int32_t> win(seq.data() + i, static_cast<std::size_t>(k));
        if (win.back() == Vocabulary::kBos) continue;  // BOS is never predicted
        ++m.counts_[Key::of(win)];
      }
    }
  }

  m.finalize();
  return m;
}

void NGramModel::finalize() {
  context_totals_.clear();
  continuations_.clear();
  normalizers_.clear();
  unigram_total_ = 0;

  for (const auto& [key, count] : counts_) {
    if (key.len == 1) {
      unigram_total_ += count;
      continue;
    }
    Key ctx;
    ctx.len = static_cast<std::uint8_t>(key.len - 1);
    for (int i = 0; i < ctx.len; ++i) ctx.ids[i] = key.ids[i];
    context_totals_[ctx] += count;
    continuations_[ctx].push_back(key.ids[key.len - 1]);
  }
  for (auto& [ctx, words] : continuations_) std::sort(words.begin(), words.end());

  // Per-context normalizer Z, processed by increasing context length so the
  // suffix-context normalizer is always available:
  //   Z(h) = 1 + b * (Z(suffix(h)) - sum_{w seen after h} raw(suffix(h), w))
  // with Z(empty) = 1 because the add-one unigram sums to 1 exactly.
  std::vector<std::vector<Key>> by_len(static_cast<std::size_t>(order_));
  for (const auto& [ctx, total] : context_totals_) {
    by_len[ctx.len].push_back(ctx);
  }
  for (int len = 1; len < order_; ++len) {
    for (const Key& ctx : by_len[static_cast<std::size_t>(len)]) {
      Key shorter = ctx.suffix();
      double z_shorter = 1.0;
      if (shorter.len > 0) z_shorter = normalizers_.at(shorter);
      std::span<const std::int32_t> shorter_span(shorter.ids.data(), shorter.len);
      double covered = 0.0;
      for (std::int32_t w : continuations_.at(ctx)) {
        covered += raw_score(shorter_span, w);
      }
      normalizers_[ctx] = 1.0 + backoff_ * (z_shorter - covered);
    }
  }
}

double NGramModel::addone_unigram(std::int32_t word) const {
  std::int64_t c = 0;
  std::array<std::int32_t, 1> one{word};
  auto it = counts_.find(Key::of(one));
  if (it != counts_.end()) c = it->second;
  double pred_vocab = static_cast<double>(vocab_.size() - 1);  // BOS excluded
  return (static_cast<double>(c) + 1.0) /
         (static_cast<double>(unigram_total_) + pred_vocab);
}

double NGramModel::raw_score(std::span<const std::int32_t> context,
                             std::int32_t word) const {
  double factor = 1.0;
  std::size_t start = 0;
  std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) start = context.size() - max_ctx;
  for (std::size_t m = context.size() - start; m > 0; --m) {
    auto ctx = context.subspan(context.size() - m, m);
    auto total_it = context_totals_.find(Key::of(ctx));
    if (total_it != context_totals_.end()) {
      std::array<std::int32_t, kMaxOrder> buf;
      for (std::size_t i = 0; i < m; ++i) buf[i] = ctx[i];
      buf[m] = word;
      auto cnt_it = counts_.find(Key::of({buf.data(), m + 1}));
      if (cnt_it != counts_.end()) {
        return factor * static_cast<double>(cnt_it->second) /
               static_cast<double>(total_it->second);
      }
    }
    factor *= backoff_;
  }
  return factor * addone_unigram(word);
}

double NGramModel::word_prob(std::span<const std::int32_t> context,
                             std::int32_t word) const {
  if (word == Vocabulary::kBos) {
    throw std::invalid_argument("BOS is not a predictable word");
  }
  std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  std::size_t avail = std::min(context.size(), max_ctx);
  // Longest context suffix seen in training; backoff factors above it cancel
  // between the raw score and the normalizer.
  for (std::size_t m = avail; m > 0; --m) {
    auto ctx = context.subspan(context.size() - m, m);
    auto it = normalizers_.find(Key::of(ctx));
    if (it != normalizers_.end()) return raw_score(ctx, word) / it->second;
  }
  return addone_unigram(word);
}

double NGramModel::sentence_log_prob(const Sentence& y) const {
  std::vector<std::int32_t> seq(static_cast<std::size_t>(order_ - 1), Vocabulary::kBos);
  std::vector<std::int32_t> ids = ids_of(y);
  seq.insert(seq.end(), ids.begin(), ids.end());
  seq.push_back(Vocabulary::kEos);
  double lp = 0.0;
  for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < seq.size(); ++i) {
    std::span<const std::int32_t> ctx(seq.data(), i);
    lp += std::log(word_prob(ctx, seq[i]));
  }
  return lp;
}

double NGramModel::fluency_score(const Sentence& y) const {
  return std::exp(sentence_log_prob(y) / static_cast<double>(y.size() + 1));
}

std::vector<std::int32_t> NGramModel::ids_of(const Sentence& s) const {
  std::vector<std::int32_t> ids;
  ids.reserve(s.size());
  for (const Token& t : s.tokens) {
    std::int32_t id = vocab_.id(t);
    if (Vocabulary::is_reserved(id)) id = Vocabulary::kUnk;
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::int32_t> NGramModel::candidate_words(
    std::span<const std::int32_t> left, std::span<const std::int32_t> right,
    int k) const {
  if (k < 1) throw std::invalid_argument("candidate_words: k must be >= 1");

  std::vector<std::int32_t> ctx(static_cast<std::size_t>(order_ - 1), Vocabulary::kBos);
  ctx.insert(ctx.end(), left.begin(), left.end());
  std::int32_t next = right.empty() ? Vocabulary::kEos : right.front();

  std::vector<std::pair<double, std::int32_t>> scored;
  scored.reserve(static_cast<std::size_t>(vocab_.size()));
  std::vector<std::int32_t> with_word(ctx);
  with_word.push_back(0);
  for (std::int32_t w = 0; w < vocab_.size(); ++w) {
    if (w == Vocabulary::kBos) continue;
    double p_word = word_prob(ctx, w);
    with_word.back() = w;
    double p_next = word_prob(with_word, next);
    scored.emplace_back(p_word * p_next, w);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
  std::vector<std::int32_t> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

std::int64_t NGramModel::count(std::span<const std::int32_t> ngram) const {
  auto it = counts_.find(Key::of(ngram));
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t NGramModel::context_total(std::span<const std::int32_t> context) const {
  if (context.empty()) return unigram_total_;
  auto it = context_totals_.find(Key::of(context));
  return it == context_totals_.end() ? 0 : it->second;
}

void NGramModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << "salt-ngram-v1\n";
  out << order_ << ' ' << backoff_ << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (int id = Vocabulary::kUnk + 1; id < vocab_.size(); ++id) {
    out << vocab_.token(id) << '\n';
  }
  out << "ngrams " << counts_.size() << '\n';
  std::vector<std::pair<Key, std::int64_t>> rows(counts_.begin(), counts_.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.len != b.first.len) return a.first.len < b.first.len;
    return std::lexicographical_compare(
        a.first.ids.begin(), a.first.ids.begin() + a.first.len,
        b.first.ids.begin(), b.first.ids.begin() + b.first.len);
  });
  for (const auto& [key, count] : rows) {
    out << static_cast<int>(key.len);
    for (int i = 0; i < key.len; ++i) out << ' ' << key.ids[i];
    out << ' ' << count << '\n';
  }
  out << "tokens " << trained_tokens_ << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != "salt-ngram-v1") throw std::runtime_error("not a model file: " + path);

  NGramModel m;
  in >> m.order_ >> m.backoff_;
  std::string tag;
  int vocab_size = 0;
  in >> tag >> vocab_size;
  if (tag != "vocab") throw std::runtime_error("corrupt model file: " + path);
  std::string token;
  for (int i = Vocabulary::kUnk + 1; i < vocab_size; ++i) {
    in >> token;
    m.vocab_.add(token);
  }
  std::size_t n = 0;
  in >> tag >> n;
  if (tag != "ngrams") throw std::runtime_error("corrupt model file: " + path);
  for (std::size_t i = 0; i < n; ++i) {
    int len = 0;
    in >> len;
    Key key;
    key.len = static_cast<std::uint8_t>(len);
    for (int j = 0; j < len; ++j) in >> key.ids[j];
    std::int64_t count = 0;
    in >> count;
    m.counts_[key] = count;
  }
  if (in >> tag && tag == "tokens") in >> m.trained_tokens_;
  if (in.fail()) throw std::runtime_error("corrupt model file: " + path);
  m.finalize();
  return m;
}

}  // namespace salt
