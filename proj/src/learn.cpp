#include "salt/learn.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace salt {

namespace {

Token bos_surface() { return Token(Vocabulary::kBosSurface); }
Token eos_surface() { return Token(Vocabulary::kEosSurface); }

void sort_ranked(std::vector<RuleTarget>& targets) {
  std::sort(targets.begin(), targets.end(), [](const RuleTarget& a, const RuleTarget& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
}

}  // namespace

std::vector<AlignOp> align(const Sentence& input, const Sentence& output) {
  const std::size_t m = input.size();
  const std::size_t n = output.size();
  std::vector<std::vector<int>> dp(m + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) dp[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= n; ++j) dp[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      int sub = dp[i - 1][j - 1] + (input.tokens[i - 1] == output.tokens[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }

  std::vector<AlignOp> script;
  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 || j > 0) {
    // Preference order on cost ties: diagonal, then delete, then insert.
    if (i > 0 && j > 0 &&
        dp[i][j] == dp[i - 1][j - 1] +
                        (input.tokens[i - 1] == output.tokens[j - 1] ? 0 : 1)) {
      bool same = input.tokens[i - 1] == output.tokens[j - 1];
      script.push_back(AlignOp{same ? AlignOpKind::kMatch : AlignOpKind::kReplace,
                               static_cast<int>(i - 1), input.tokens[i - 1],
                               output.tokens[j - 1]});
      --i;
      --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      script.push_back(
          AlignOp{AlignOpKind::kDelete, static_cast<int>(i - 1), input.tokens[i - 1], {}});
      --i;
    } else {
      script.push_back(
          AlignOp{AlignOpKind::kInsert, static_cast<int>(i), {}, output.tokens[j - 1]});
      --j;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

Sentence apply_script(const Sentence& input, const std::vector<AlignOp>& script) {
  Sentence out;
  std::size_t cursor = 0;
  for (const AlignOp& op : script) {
    switch (op.kind) {
      case AlignOpKind::kMatch:
      case AlignOpKind::kReplace:
      case AlignOpKind::kDelete:
        if (cursor >= input.size() || input.tokens[cursor] != op.from) {
          throw std::invalid_argument("script does not match input");
        }
        if (op.kind != AlignOpKind::kDelete) out.tokens.push_back(op.to);
        ++cursor;
        break;
      case AlignOpKind::kInsert:
        out.tokens.push_back(op.to);
        break;
    }
  }
  if (cursor != input.size()) throw std::invalid_argument("script does not match input");
  return out;
}

const std::vector<RuleTarget>* SubstitutionModel::replace_targets(
    const Token& context, const Token& source) const {
  auto it = replace_rules_.find(Key{context, source});
  return it == replace_rules_.end() ? nullptr : &it->second;
}

const std::vector<RuleTarget>* SubstitutionModel::insert_targets(
    const Token& left, const Token& right) const {
  auto it = insert_rules_.find(Key{left, right});
  return it == insert_rules_.end() ? nullptr : &it->second;
}

Sentence SubstitutionModel::initial_candidate(const Sentence& x) const {
  Sentence out;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const Token& left = i == 0 ? bos_surface() : x.tokens[i - 1];
    const Token& right = i == n ? eos_surface() : x.tokens[i];
    if (const auto* ins = insert_targets(left, right)) {
      out.tokens.push_back(ins->front().word);
    }
    if (i < n) {
      if (const auto* repl = replace_targets(left, x.tokens[i])) {
        out.tokens.push_back(repl->front().word);
      } else {
        out.tokens.push_back(x.tokens[i]);
      }
    }
  }
  return out;
}

void SubstitutionModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [key, targets] : replace_rules_) {
    for (const RuleTarget& t : targets) {
      out << "REPL\t" << key.first << '\t' << key.second << '\t' << t.word << '\t'
          << t.count << '\n';
    }
  }
  for (const auto& [key, targets] : insert_rules_) {
    for (const RuleTarget& t : targets) {
      out << "INS\t" << key.first << '\t' << key.second << '\t' << t.word << '\t'
          << t.count << '\n';
    }
  }
  if (!out) throw std::runtime_error("cannot write " + path);
}

SubstitutionModel SubstitutionModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  SubstitutionModel model;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag, a, b, word, count_text;
    if (!std::getline(fields, tag, '\t') || !std::getline(fields, a, '\t') ||
        !std::getline(fields, b, '\t') || !std::getline(fields, word, '\t') ||
        !std::getline(fields, count_text)) {
      throw std::runtime_error("bad substitution rule line " + std::to_string(line_no));
    }
    std::int64_t count = 0;
    try {
      count = std::stoll(count_text);
    } catch (const std::exception&) {
      throw std::runtime_error("bad substitution rule line " + std::to_string(line_no));
    }
    if (count < 1) {
      throw std::runtime_error("bad substitution rule line " + std::to_string(line_no));
    }
    if (tag == "REPL") {
      model.replace_rules_[Key{a, b}].push_back(RuleTarget{word, count});
    } else if (tag == "INS") {
      model.insert_rules_[Key{a, b}].push_back(RuleTarget{word, count});
    } else {
      throw std::runtime_error("bad substitution rule line " + std::to_string(line_no));
    }
  }
  for (auto& [key, targets] : model.replace_rules_) sort_ranked(targets);
  for (auto& [key, targets] : model.insert_rules_) sort_ranked(targets);
  return model;
}

SubstitutionModel learn_from_search(
    const std::vector<std::pair<Sentence, Sentence>>& pairs, int min_support) {
  if (pairs.empty()) throw std::invalid_argument("empty pairs");
  if (min_support < 1) throw std::invalid_argument("min_support must be >= 1");

  std::map<SubstitutionModel::Key, std::map<Token, std::int64_t>> repl_counts;
  std::map<SubstitutionModel::Key, std::map<Token, std::int64_t>> ins_counts;
  for (const auto& [input, output] : pairs) {
    for (const AlignOp& op : align(input, output)) {
      std::size_t pos = static_cast<std::size_t>(op.input_pos);
      const Token& prev = pos == 0 ? bos_surface() : input.tokens[pos - 1];
      if (op.kind == AlignOpKind::kReplace) {
        ++repl_counts[{prev, op.from}][op.to];
      } else if (op.kind == AlignOpKind::kInsert) {
        const Token& next = pos == input.size() ? eos_surface() : input.tokens[pos];
        ++ins_counts[{prev, next}][op.to];
      }
    }
  }

  SubstitutionModel model;
  auto keep = [min_support](const auto& counts, auto& rules) {
    for (const auto& [key, by_word] : counts) {
      std::vector<RuleTarget> targets;
      for (const auto& [word, count] : by_word) {
        if (count >= min_support) targets.push_back(RuleTarget{word, count});
      }
      if (targets.empty()) continue;
      sort_ranked(targets);
      rules.emplace(key, std::move(targets));
    }
  };
  keep(repl_counts, model.replace_rules_);
  keep(ins_counts, model.insert_rules_);
  return model;
}

AlternationOutcome alternate(const std::vector<Sentence>& inputs, const Objective& o,
                             const NGramModel& lm, const SearchConfig& cfg,
                             int rounds, int min_support, BatchMode mode) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (inputs.empty()) throw std::invalid_argument("empty corpus");

  AlternationOutcome outcome;
  std::vector<Sentence> inits = inputs;
  for (int r = 0; r < rounds; ++r) {
    if (r > 0) {
      std::vector<std::pair<Sentence, Sentence>> pairs;
      pairs.reserve(inputs.size());
      const RoundResult& prev = outcome.rounds.back();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        pairs.emplace_back(inputs[i], prev.results[i].output);
      }
      outcome.model = learn_from_search(pairs, min_support);
      inits.clear();
      for (const Sentence& x : inputs) inits.push_back(outcome.model.initial_candidate(x));
    }

    RoundResult round;
    round.results = run_batch(
        inputs.size(), cfg.seed,
        [&](std::size_t i, std::uint64_t seed) {
          SearchConfig per = cfg;
          per.seed = seed;
          return run_word_search(o, inits[i], inputs[i], lm, per);
        },
        mode);
    double total = 0.0;
    for (const SearchResult& r2 : round.results) total += r2.output_log_score;
    round.mean_log_score = total / static_cast<double>(round.results.size());
    outcome.rounds.push_back(std::move(round));
  }
  return outcome;
}

}  // namespace salt
