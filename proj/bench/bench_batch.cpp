// Times run_batch in serial and parallel mode on the same search workload and
// verifies that the two modes produce identical results. `bench_batch quick`
// runs a small configuration suitable as a smoke test.
#include <chrono>
#include <cstring>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "salt/batch.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/search.hpp"
#include "salt/text.hpp"

using namespace salt;

namespace {

NGramModel build_lm() {
  const std::vector<std::string> subjects = {"the cat", "the dog", "a bird",
                                             "the child", "a friend"};
  const std::vector<std::string> verbs = {"sat down", "ran off", "slept well",
                                          "played here", "came home"};
  std::vector<Sentence> corpus;
  for (const std::string& s : subjects) {
    for (const std::string& v : verbs) corpus.push_back(tokenize(s + " " + v));
  }
  return NGramModel::train(corpus, 3);
}

std::vector<Sentence> build_inputs(const NGramModel& lm, std::size_t count) {
  std::vector<Token> words;
  for (int id = 3; id < lm.vocab().size(); ++id) {
    words.push_back(lm.vocab().token(id));
  }
  std::mt19937_64 rng(4242);
  std::vector<Sentence> inputs;
  for (std::size_t i = 0; i < count; ++i) {
    int len = std::uniform_int_distribution<int>(4, 7)(rng);
    Sentence s;
    for (int w = 0; w < len; ++w) {
      s.tokens.push_back(
          words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)]);
    }
    inputs.push_back(std::move(s));
  }
  return inputs;
}

double run_timed(std::size_t count, const BatchWorker& worker, BatchMode mode,
                 std::vector<SearchResult>& results) {
  auto start = std::chrono::steady_clock::now();
  results = run_batch(count, 1, worker, mode);
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool same_results(const std::vector<SearchResult>& a,
                  const std::vector<SearchResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].output != b[i].output || a[i].output_log_score != b[i].output_log_score ||
        a[i].init_log_score != b[i].init_log_score ||
        a[i].first_best_step != b[i].first_best_step ||
        a[i].trace.size() != b[i].trace.size()) {
      return false;
    }
    for (std::size_t t = 0; t < a[i].trace.size(); ++t) {
      if (a[i].trace[t].accepted != b[i].trace[t].accepted ||
          a[i].trace[t].log_score != b[i].trace[t].log_score) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::strcmp(argv[1], "quick") == 0;
  const std::size_t items = quick ? 8 : 64;
  const int iterations = quick ? 60 : 300;

  NGramModel lm = build_lm();
  Objective o;
  o.components.push_back({"fluency", [&lm](const Sentence& y, const Sentence&) {
                            return lm.fluency_score(y);
                          }});
  std::vector<Sentence> inputs = build_inputs(lm, items);

  SearchConfig cfg;
  cfg.algorithm = Algorithm::kSimulatedAnnealing;
  cfg.iterations = iterations;
  cfg.cooling_rate = cfg.t0 / cfg.iterations;
  BatchWorker worker = [&](std::size_t index, std::uint64_t seed) {
    SearchConfig local = cfg;
    local.seed = seed;
    return run_word_search(o, inputs[index], inputs[index], lm, local);
  };

  std::vector<SearchResult> serial;
  std::vector<SearchResult> parallel;
  double serial_ms = run_timed(items, worker, BatchMode::kSerial, serial);
  double parallel_ms = run_timed(items, worker, BatchMode::kParallel, parallel);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::cout << "items: " << items << "  iterations/item: " << iterations
            << "  threads: " << threads << '\n'
            << "serial:   " << serial_ms << " ms\n"
            << "parallel: " << parallel_ms << " ms\n"
            << "speedup:  " << (parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0)
            << "x\n";

  if (!same_results(serial, parallel)) {
    std::cout << "MISMATCH: serial and parallel results differ\n";
    return 1;
  }
  std::cout << "serial and parallel results are identical\n";
  return 0;
}
