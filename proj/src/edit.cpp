#include "salt/edit.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace salt {

namespace {

constexpr double kReverseFloor = 1e-12;

std::vector<EditKind> applicable_kinds(const EditConfig& config, std::size_t length,
                                       bool has_words) {
  std::vector<EditKind> kinds;
  if (config.enabled.replace && length >= 1 && has_words) kinds.push_back(EditKind::kReplace);
  if (config.enabled.insert && has_words) kinds.push_back(EditKind::kInsert);
  if (config.enabled.erase && length >= 2) kinds.push_back(EditKind::kDelete);
  return kinds;
}

int draw_index(std::mt19937_64& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

std::size_t draw_from(const std::vector<double>& dist, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    cum += dist[i];
    if (u < cum) return i;
  }
  return dist.size() - 1;
}

/// LM shortlist around a slot, as surface tokens. EOS and UNK can rank inside
/// the top k but are not insertable words, so over-fetch by the number of
/// droppable ids and trim back to k.
std::vector<Token> shortlist_at(const NGramModel& lm, const Sentence& y,
                                int left_end, int right_begin, int k) {
  std::vector<std::int32_t> ids = lm.ids_of(y);
  std::span<const std::int32_t> left(ids.data(), static_cast<std::size_t>(left_end));
  std::span<const std::int32_t> right(ids.data() + right_begin,
                                      ids.size() - static_cast<std::size_t>(right_begin));
  std::vector<Token> words;
  for (std::int32_t id : lm.candidate_words(left, right, k + 2)) {
    if (Vocabulary::is_reserved(id)) continue;
    words.push_back(lm.vocab().token(id));
    if (static_cast<int>(words.size()) == k) break;
  }
  return words;
}

std::optional<std::size_t> index_of(const std::vector<Token>& words, const Token& w) {
  auto it = std::find(words.begin(), words.end(), w);
  if (it == words.end()) return std::nullopt;
  return static_cast<std::size_t>(it - words.begin());
}

}  // namespace

std::string summarize(const EditProposal& e) {
  switch (e.kind) {
    case EditKind::kReplace:
      return "replace@" + std::to_string(e.position) + ":" + e.word.value_or("?");
    case EditKind::kInsert:
      return "insert@" + std::to_string(e.position) + ":" + e.word.value_or("?");
    case EditKind::kDelete:
      return "delete@" + std::to_string(e.position);
    case EditKind::kSwapSelection:
      return "swap@" + std::to_string(e.position) + "," + std::to_string(e.position2);
  }
  return "?";
}

std::vector<double> gibbs_word_distribution(const Objective& o, const Sentence& y,
                                            const Sentence& x, int position,
                                            EditKind mode,
                                            const std::vector<Token>& shortlist) {
  if (shortlist.empty()) throw std::invalid_argument("gibbs over empty shortlist");
  if (mode != EditKind::kReplace && mode != EditKind::kInsert) {
    throw std::invalid_argument("gibbs mode must be replace or insert");
  }
  std::vector<double> log_scores;
  log_scores.reserve(shortlist.size());
  for (const Token& w : shortlist) {
    EditProposal e;
    e.kind = mode;
    e.position = position;
    e.word = w;
    log_scores.push_back(evaluate_log_score(o, apply_edit(y, e), x));
  }
  double max_ls = *std::max_element(log_scores.begin(), log_scores.end());
  double z = 0.0;
  std::vector<double> dist(log_scores.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    dist[i] = std::exp(log_scores[i] - max_ls);
    z += dist[i];
  }
  for (double& p : dist) p /= z;
  return dist;
}

std::pair<EditProposal, Sentence> propose_edit(const Objective& o, const Sentence& y,
                                               const Sentence& x, const NGramModel& lm,
                                               std::mt19937_64& rng,
                                               const EditConfig& config) {
  if (!config.enabled.any()) throw std::runtime_error("no applicable edit");
  bool has_words = lm.vocab().size() > Vocabulary::kUnk + 1;
  std::vector<EditKind> kinds = applicable_kinds(config, y.size(), has_words);
  if (kinds.empty()) throw std::runtime_error("no applicable edit");

  int len = static_cast<int>(y.size());
  EditKind kind = kinds[static_cast<std::size_t>(draw_index(rng, static_cast<int>(kinds.size())))];
  double log_p_kind = -std::log(static_cast<double>(kinds.size()));

  EditProposal e;
  e.kind = kind;

  if (kind == EditKind::kReplace) {
    e.position = draw_index(rng, len);
    std::vector<Token> words =
        shortlist_at(lm, y, e.position, e.position + 1, config.shortlist_k);
    std::vector<double> dist =
        gibbs_word_distribution(o, y, x, e.position, EditKind::kReplace, words);
    std::size_t pick = draw_from(dist, rng);
    e.word = words[pick];
    e.forward_log_prob = log_p_kind - std::log(static_cast<double>(len)) + std::log(dist[pick]);
    Sentence candidate = apply_edit(y, e);
    // The reverse replace sees the same contexts, hence the same shortlist
    // and the same Gibbs distribution.
    auto back = index_of(words, y.tokens[static_cast<std::size_t>(e.position)]);
    double p_back_word = back ? dist[*back] : kReverseFloor;
    std::size_t back_kinds = applicable_kinds(config, candidate.size(), has_words).size();
    e.backward_log_prob = -std::log(static_cast<double>(back_kinds)) -
                          std::log(static_cast<double>(len)) + std::log(p_back_word);
    return {e, std::move(candidate)};
  }

  if (kind == EditKind::kInsert) {
    e.position = draw_index(rng, len + 1);
    std::vector<Token> words =
        shortlist_at(lm, y, e.position, e.position, config.shortlist_k);
    std::vector<double> dist =
        gibbs_word_distribution(o, y, x, e.position, EditKind::kInsert, words);
    std::size_t pick = draw_from(dist, rng);
    e.word = words[pick];
    e.forward_log_prob =
        log_p_kind - std::log(static_cast<double>(len + 1)) + std::log(dist[pick]);
    Sentence candidate = apply_edit(y, e);
    // Reverse: delete this slot from the longer sentence.
    std::vector<EditKind> back_kinds = applicable_kinds(config, candidate.size(), has_words);
    bool reversible =
        std::find(back_kinds.begin(), back_kinds.end(), EditKind::kDelete) != back_kinds.end();
    e.backward_log_prob =
        reversible ? -std::log(static_cast<double>(back_kinds.size())) -
                         std::log(static_cast<double>(candidate.size()))
                   : std::log(kReverseFloor);
    return {e, std::move(candidate)};
  }

  // Delete
  e.position = draw_index(rng, len);
  Token removed = y.tokens[static_cast<std::size_t>(e.position)];
  e.forward_log_prob = log_p_kind - std::log(static_cast<double>(len));
  Sentence candidate = apply_edit(y, e);
  std::vector<EditKind> back_kinds = applicable_kinds(config, candidate.size(), has_words);
  bool insert_back =
      std::find(back_kinds.begin(), back_kinds.end(), EditKind::kInsert) != back_kinds.end();
  if (insert_back) {
    std::vector<Token> words =
        shortlist_at(lm, candidate, e.position, e.position, config.shortlist_k);
    double p_back_word = kReverseFloor;
    if (auto idx = index_of(words, removed)) {
      std::vector<double> dist =
          gibbs_word_distribution(o, candidate, x, e.position, EditKind::kInsert, words);
      p_back_word = dist[*idx];
    }
    e.backward_log_prob = -std::log(static_cast<double>(back_kinds.size())) -
                          std::log(static_cast<double>(candidate.size() + 1)) +
                          std::log(p_back_word);
  } else {
    e.backward_log_prob = std::log(kReverseFloor);
  }
  return {e, std::move(candidate)};
}

Sentence apply_edit(const Sentence& y, const EditProposal& e) {
  int len = static_cast<int>(y.size());
  Sentence out = y;
  switch (e.kind) {
    case EditKind::kReplace:
      if (e.position < 0 || e.position >= len) throw std::out_of_range("replace position");
      if (!e.word) throw std::invalid_argument("replace needs a word");
      out.tokens[static_cast<std::size_t>(e.position)] = *e.word;
      return out;
    case EditKind::kInsert:
      if (e.position < 0 || e.position > len) throw std::out_of_range("insert position");
      if (!e.word) throw std::invalid_argument("insert needs a word");
      out.tokens.insert(out.tokens.begin() + e.position, *e.word);
      return out;
    case EditKind::kDelete:
      if (e.position < 0 || e.position >= len) throw std::out_of_range("delete position");
      out.tokens.erase(out.tokens.begin() + e.position);
      return out;
    case EditKind::kSwapSelection:
      throw std::invalid_argument("selection swaps apply to masks, not sentences");
  }
  throw std::invalid_argument("unknown edit kind");
}

SelectionMask SelectionMask::first_k(const Sentence& source, int budget_k) {
  SelectionMask m;
  m.source = source;
  m.budget_k = budget_k;
  m.selected.assign(source.size(), 0);
  m.eligible.assign(source.size(), 0);
  int eligible_total = 0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!is_punctuation_token(source.tokens[i])) {
      m.eligible[i] = 1;
      ++eligible_total;
    }
  }
  if (budget_k <= 0 || budget_k >= eligible_total) throw std::runtime_error("degenerate mask");
  int taken = 0;
  for (std::size_t i = 0; i < source.size() && taken < budget_k; ++i) {
    if (m.eligible[i]) {
      m.selected[i] = 1;
      ++taken;
    }
  }
  return m;
}

Sentence SelectionMask::realize() const {
  Sentence out;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (selected[i]) out.tokens.push_back(source.tokens[i]);
  }
  return out;
}

int SelectionMask::eligible_count() const {
  return static_cast<int>(std::count(eligible.begin(), eligible.end(), 1));
}

std::pair<EditProposal, SelectionMask> propose_swap(const SelectionMask& mask,
                                                    std::mt19937_64& rng) {
  std::vector<int> in, out;
  for (std::size_t i = 0; i < mask.source.size(); ++i) {
    if (!mask.eligible[i]) continue;
    (mask.selected[i] ? in : out).push_back(static_cast<int>(i));
  }
  if (in.empty() || out.empty()) throw std::runtime_error("degenerate mask");

  int drop = in[static_cast<std::size_t>(draw_index(rng, static_cast<int>(in.size())))];
  int take = out[static_cast<std::size_t>(draw_index(rng, static_cast<int>(out.size())))];

  SelectionMask next = mask;
  next.selected[static_cast<std::size_t>(drop)] = 0;
  next.selected[static_cast<std::size_t>(take)] = 1;

  EditProposal e;
  e.kind = EditKind::kSwapSelection;
  e.position = drop;
  e.position2 = take;
  double log_p = -std::log(static_cast<double>(in.size())) -
                 std::log(static_cast<double>(out.size()));
  e.forward_log_prob = log_p;
  e.backward_log_prob = log_p;  // reverse swap has the same pick probabilities
  return {e, std::move(next)};
}

}  // namespace salt
