// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "salt/edit.hpp"
#include "salt/learn.hpp"
#include "salt/metrics.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/scorers.hpp"
#include "salt/search.hpp"
#include "salt/task.hpp"
#include "salt/text.hpp"

using namespace salt;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS: " : "FAIL: ") << name;
  if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

void write_file(const std::string& path, const std::string& contents) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  out << contents;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Three states with scores {1,2,3}; uniform symmetric proposals over the
// other two states. MH targeting exp(log_score) must occupy state s
// proportionally to its score: (1/6, 2/6, 3/6).
struct ToyChain {
  using State = int;

  double log_score(State s) const { return std::log(static_cast<double>(s + 1)); }

  std::pair<EditProposal, State> propose(State current, std::mt19937_64& rng) const {
    static constexpr int kOthers[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    int pick = std::uniform_int_distribution<int>(0, 1)(rng);
    State next = kOthers[current][pick];
    EditProposal p;
    p.kind = EditKind::kReplace;
    p.position = 0;
    p.word = Token(1, static_cast<char>('1' + next));
    p.forward_log_prob = std::log(0.5);
    p.backward_log_prob = std::log(0.5);
    return {p, next};
  }

  Sentence to_sentence(State s) const {
    return Sentence{Token(1, static_cast<char>('1' + s))};
  }
};

std::vector<std::string> noun_list() {
  return {"film",  "movie", "song",   "book",  "game",  "city",  "color",
          "team",  "car",   "house",  "name",  "story", "drink", "place",
          "shirt", "plan",  "phone",  "sport", "tool",  "road"};
}

// --- criteria -------------------------------------------------------------

void check_mh_stationarity() {
  SearchConfig cfg;
  cfg.algorithm = Algorithm::kMetropolisHastings;
  cfg.iterations = 100000;
  cfg.seed = 20240817;
  ToyChain chain;
  SearchResult res = run_search(chain, 0, cfg);

  std::array<long, 3> counts = {0, 0, 0};
  int state = 0;
  for (const TraceStep& step : res.trace) {
    if (step.accepted) state = step.candidate.tokens[0][0] - '1';
    ++counts[static_cast<std::size_t>(state)];
  }
  bool ok = true;
  std::ostringstream detail;
  for (int s = 0; s < 3; ++s) {
    double freq = static_cast<double>(counts[static_cast<std::size_t>(s)]) /
                  static_cast<double>(cfg.iterations);
    double target = static_cast<double>(s + 1) / 6.0;
    if (std::abs(freq - target) > 0.02) {
      ok = false;
      detail << "state " << s << ": " << freq << " vs " << target << "; ";
    }
  }
  report("MH stationarity on the 3-state chain within +/-0.02", ok, detail.str());
}

void check_sa_acceptance_law() {
  std::mt19937_64 meta(7);
  std::uniform_real_distribution<double> delta_dist(-3.0, 1.0);
  std::uniform_real_distribution<double> temp_dist(0.05, 2.0);
  std::mt19937_64 rng(99);
  bool ok = true;
  std::ostringstream detail;
  for (int pair = 0; pair < 1000 && ok; ++pair) {
    double delta = delta_dist(meta);
    double temperature = temp_dist(meta);
    int accepted = 0;
    for (int draw = 0; draw < 10000; ++draw) {
      if (accept_annealing(delta, temperature, rng)) ++accepted;
    }
    double rate = accepted / 10000.0;
    if (delta >= 0.0) {
      if (rate != 1.0) {
        ok = false;
        detail << "delta " << delta << " >= 0 but rate " << rate;
      }
    } else {
      double expected = std::exp(delta / temperature);
      if (std::abs(rate - expected) > 0.02) {
        ok = false;
        detail << "delta " << delta << " T " << temperature << ": rate " << rate
               << " vs " << expected;
      }
    }
  }
  report("SA acceptance matches min(1, exp(delta/T)) within +/-0.02", ok,
         detail.str());
}

NGramModel toy_lm() {
  std::vector<std::string> lines = {
      "the cat sat down",    "the dog sat down",   "the cat ran off",
      "the dog ran off",     "a cat sat down",     "a dog sat down",
      "the bird flew away",  "a bird flew away",   "the cat slept well",
      "the dog slept well",  "a cat played here",  "a dog played here",
  };
  std::vector<Sentence> corpus;
  for (const std::string& line : lines) corpus.push_back(tokenize(line));
  return NGramModel::train(corpus, 3);
}

Objective fluency_objective(const NGramModel& lm) {
  Objective o;
  o.components.push_back(
      {"fluency", [&lm](const Sentence& y, const Sentence&) {
         return lm.fluency_score(y);
       }});
  return o;
}

void check_hill_climb_monotonic() {
  NGramModel lm = toy_lm();
  Objective o = fluency_objective(lm);
  std::vector<std::string> words = {"the", "a",    "cat",  "dog",  "bird", "sat",
                                    "ran", "flew", "down", "off",  "away", "well",
                                    "here", "slept", "played"};
  std::mt19937_64 meta(31);
  SearchConfig cfg;
  cfg.algorithm = Algorithm::kHillClimb;
  cfg.iterations = 60;
  bool ok = true;
  std::ostringstream detail;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    int len = std::uniform_int_distribution<int>(4, 8)(meta);
    Sentence input;
    for (int i = 0; i < len; ++i) {
      input.tokens.push_back(
          words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(meta)]);
    }
    cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
    SearchResult res = hill_climb(o, input, input, lm, cfg);
    double prev = res.init_log_score;
    for (const TraceStep& step : res.trace) {
      if (step.log_score < prev) {
        ok = false;
        detail << "trial " << trial << " decreased at step " << step.step;
        break;
      }
      prev = step.log_score;
    }
    if (res.output_log_score < res.init_log_score) {
      ok = false;
      detail << "trial " << trial << " ended below init";
    }
  }
  report("hill climbing is monotone on 100 random searches", ok, detail.str());
}

void check_gibbs_oracle() {
  NGramModel lm = toy_lm();
  Objective o = fluency_objective(lm);
  Sentence y = {"the", "cat", "down"};
  std::vector<Token> shortlist = {"sat", "ran", "slept", "flew", "played"};
  std::vector<double> got =
      gibbs_word_distribution(o, y, y, 1, EditKind::kReplace, shortlist);

  std::vector<double> scores;
  for (const Token& w : shortlist) {
    Sentence candidate = y;
    candidate.tokens[1] = w;
    scores.push_back(evaluate_log_score(o, candidate, y));
  }
  double max_score = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - max_score);
  bool ok = got.size() == shortlist.size();
  std::ostringstream detail;
  for (std::size_t i = 0; ok && i < scores.size(); ++i) {
    double expected = std::exp(scores[i] - max_score) / z;
    if (std::abs(got[i] - expected) > 1e-9) {
      ok = false;
      detail << "slot " << i << ": " << got[i] << " vs " << expected;
    }
  }
  report("Gibbs word distribution equals brute-force softmax within 1e-9", ok,
         detail.str());
}

void check_summarization_structure() {
  std::vector<std::string> nouns = noun_list();
  std::ostringstream corpus;
  std::vector<std::string> inputs;
  for (int i = 0; i < 50; ++i) {
    const std::string& a = nouns[static_cast<std::size_t>(i) % nouns.size()];
    const std::string& b = nouns[static_cast<std::size_t>(i + 7) % nouns.size()];
    std::string line = "the " + a + " and the " + b +
                       " were ready for the long trip today";
    corpus << line << '\n';
    inputs.push_back(line);
  }
  write_file("tmp_accept/sum_corpus.txt", corpus.str());

  GenConfig cfg = parse_gen_config(
      R"({"iterations": 150, "budget_k": 8,
          "components": [{"name": "fluency"}],
          "lm_path": "tmp_accept/sum_corpus.txt"})");
  TaskResources res = load_resources(cfg, TaskKind::kSummarize);
  GenerationOutcome out =
      run_generation(cfg, TaskKind::kSummarize, res, inputs, 5);

  bool ok = out.records.size() == inputs.size();
  std::ostringstream detail;
  for (std::size_t i = 0; ok && i < out.records.size(); ++i) {
    const Sentence& summary = out.records[i].output;
    int words = 0;
    for (const Token& t : summary.tokens) {
      if (!is_punctuation_token(t)) ++words;
    }
    Sentence full = tokenize(inputs[i]);
    std::size_t cursor = 0;
    for (const Token& t : full.tokens) {
      if (cursor < summary.size() && summary.tokens[cursor] == t) ++cursor;
    }
    if (words != 8 || summary.size() != 8 || cursor != summary.size()) {
      ok = false;
      detail << "line " << i << ": " << words << " words, subsequence "
             << (cursor == summary.size());
    }
  }
  report("summaries keep exactly 8 words in input order on all 50 lines", ok,
         detail.str());
}

void check_keyword_constraint() {
  NGramModel lm = toy_lm();
  std::vector<std::string> words = {"cat",  "dog",  "bird", "down", "off",
                                    "away", "well", "here", "sat",  "ran"};
  std::ostringstream corpus;
  corpus << "the cat sat down\nthe dog ran off\nthe bird flew away\n"
         << "a cat slept well\na dog played here\n";
  write_file("tmp_accept/kw_corpus.txt", corpus.str());
  GenConfig cfg = parse_gen_config(
      R"({"iterations": 80,
          "components": [{"name": "fluency"}, {"name": "keyword"}],
          "lm_path": "tmp_accept/kw_corpus.txt"})");
  TaskResources res = load_resources(cfg, TaskKind::kKeywords);

  std::mt19937_64 meta(55);
  std::vector<std::string> inputs;
  std::vector<std::vector<Token>> keyword_sets;
  for (int i = 0; i < 50; ++i) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(meta);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, words.size() - 2)(meta);
    if (b >= a) ++b;
    inputs.push_back(words[a] + " " + words[b]);
    keyword_sets.push_back({words[a], words[b]});
  }
  GenerationOutcome out = run_generation(cfg, TaskKind::kKeywords, res, inputs, 21);

  bool ok = out.records.size() == inputs.size();
  std::ostringstream detail;
  for (std::size_t i = 0; ok && i < out.records.size(); ++i) {
    if (keyword_indicator(out.records[i].output, keyword_sets[i]) != 1) {
      ok = false;
      detail << "line " << i << " lost a keyword";
    }
  }
  report("keywords survive into all 50 outputs", ok, detail.str());
}

void check_cli_determinism() {
  write_file("tmp_accept/cli_corpus.txt",
             "the cat sat down\nthe dog sat down\na cat ran off\na dog ran off\n");
  write_file("tmp_accept/cli_inputs.txt", "the cat sat down\na dog ran off\n");
  write_file("tmp_accept/cli.json",
             R"({"iterations": 40, "components": [{"name": "fluency"}],
                 "lm_path": "tmp_accept/cli_corpus.txt"})");
  const std::string base = std::string(SALT_CLI) +
                           " generate --task paraphrase --config tmp_accept/cli.json"
                           " --input tmp_accept/cli_inputs.txt --seed 17 ";
  int s1 = std::system((base +
                        "--out tmp_accept/r1.jsonl --trace tmp_accept/r1_trace.jsonl"
                        " > /dev/null 2>&1")
                           .c_str());
  int s2 = std::system((base +
                        "--out tmp_accept/r2.jsonl --trace tmp_accept/r2_trace.jsonl"
                        " > /dev/null 2>&1")
                           .c_str());
  bool ran = WIFEXITED(s1) && WEXITSTATUS(s1) == 0 && WIFEXITED(s2) &&
             WEXITSTATUS(s2) == 0;
  std::string out1 = slurp("tmp_accept/r1.jsonl");
  bool ok = ran && !out1.empty() && out1 == slurp("tmp_accept/r2.jsonl") &&
            slurp("tmp_accept/r1_trace.jsonl") == slurp("tmp_accept/r2_trace.jsonl");
  report("repeated CLI runs with one seed are byte-identical", ok,
         ran ? "outputs differ" : "CLI run failed");
}

void check_metric_fixtures() {
  bool ok = true;
  std::ostringstream detail;
  double hand = bleu({"a", "b", "c"}, {{"a", "b", "d"}}, 2);
  if (std::abs(hand - 0.57735026919) > 1e-4) {
    ok = false;
    detail << "bleu " << hand << "; ";
  }
  Sentence ref = {"the", "cat", "sat", "down"};
  Sentence far_input = {"w", "x", "y", "z"};
  double high = ibleu(ref, ref, far_input, 0.9);
  if (std::abs(high - 0.9) > 1e-6) {
    ok = false;
    detail << "ibleu high " << high << "; ";
  }
  Sentence far_ref = {"m", "n", "o", "k"};
  double low = ibleu(far_input, far_ref, far_input, 0.9);
  if (std::abs(low - (-0.1)) > 1e-6) {
    ok = false;
    detail << "ibleu low " << low;
  }
  report("BLEU and iBLEU hand fixtures match", ok, detail.str());
}

void check_learning_echo() {
  std::vector<std::string> nouns = noun_list();
  std::vector<Sentence> corpus;
  std::vector<Sentence> inputs;
  for (const std::string& noun : nouns) {
    corpus.push_back(tokenize("which " + noun + " do you like"));
    inputs.push_back(tokenize("what " + noun + " do you like"));
  }
  NGramModel lm = NGramModel::train(corpus, 3);
  Objective o = fluency_objective(lm);

  SearchConfig cfg;
  cfg.algorithm = Algorithm::kSimulatedAnnealing;
  cfg.iterations = 80;
  cfg.t0 = 1.0;
  cfg.cooling_rate = cfg.t0 / cfg.iterations;
  cfg.seed = 77;
  cfg.enabled_ops = {true, false, false};  // replace only

  AlternationOutcome outcome = alternate(inputs, o, lm, cfg, 2, 2);
  const RoundResult& r1 = outcome.rounds[0];
  const RoundResult& r2 = outcome.rounds[1];
  double fbs1 = 0.0;
  double fbs2 = 0.0;
  for (const SearchResult& r : r1.results) fbs1 += r.first_best_step;
  for (const SearchResult& r : r2.results) fbs2 += r.first_best_step;
  fbs1 /= static_cast<double>(r1.results.size());
  fbs2 /= static_cast<double>(r2.results.size());

  bool ok = r2.mean_log_score >= r1.mean_log_score - 1e-12 && fbs2 < fbs1;
  std::ostringstream detail;
  detail << "mean ls " << r1.mean_log_score << " -> " << r2.mean_log_score
         << ", mean first-best step " << fbs1 << " -> " << fbs2;
  report("learned inits keep quality and reach the best score sooner", ok,
         detail.str());
}

void check_flesch_fixtures() {
  bool ok = true;
  std::ostringstream detail;
  // clamp((206.835 - 1.015*W - 84.6*S/W) / 100) for hand-counted syllables.
  struct Case {
    Sentence y;
    double expected;
  };
  std::vector<Case> cases = {
      {{"cat"}, 1.0},  // raw 121.22, clamped high
      {{"the", "little", "cat", "is", "very", "happy"}, 0.73845},
      {{"comprehension", "organization", "everybody"}, 1e-6},  // raw < 0
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    double got = flesch_score(cases[i].y);
    if (std::abs(got - cases[i].expected) > 1e-6) {
      ok = false;
      detail << "case " << i << ": " << got << " vs " << cases[i].expected << "; ";
    }
  }
  report("Flesch fixtures match hand values within 1e-6", ok, detail.str());
}

}  // namespace

int main() {
  check_mh_stationarity();
  check_sa_acceptance_law();
  check_hill_climb_monotonic();
  check_gibbs_oracle();
  check_summarization_structure();
  check_keyword_constraint();
  check_cli_determinism();
  check_metric_fixtures();
  check_learning_echo();
  check_flesch_fixtures();
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
