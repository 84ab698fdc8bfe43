#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "salt/edit.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/objective.hpp"
#include "salt/text.hpp"

using namespace salt;

namespace {

Objective constant_objective() {
  Objective o;
  o.components = {{"const", [](const Sentence&, const Sentence&) { return 1.0; }, 1.0}};
  return o;
}

EditProposal make(EditKind kind, int pos, std::optional<Token> word = std::nullopt,
                  int pos2 = -1) {
  EditProposal e;
  e.kind = kind;
  e.position = pos;
  e.position2 = pos2;
  e.word = std::move(word);
  return e;
}

NGramModel uv_model() {
  return NGramModel::train(std::vector<Sentence>(5, {"u", "v"}), 2);
}

}  // namespace

TEST_CASE("apply_edit") {
  Sentence y = tokenize("What movie do you like most?");
  REQUIRE(y.tokens ==
          std::vector<Token>{"what", "movie", "do", "you", "like", "most", "?"});

  SUBCASE("replace") {
    Sentence out = apply_edit(y, make(EditKind::kReplace, 0, "which"));
    CHECK(out.tokens[0] == "which");
    CHECK(out.size() == y.size());
    CHECK(y.tokens[0] == "what");  // input untouched
  }

  SUBCASE("insert shifts the suffix right") {
    Sentence out = apply_edit(y, make(EditKind::kInsert, 2, "really"));
    REQUIRE(out.size() == y.size() + 1);
    CHECK(out.tokens[2] == "really");
    CHECK(out.tokens[3] == "do");
    // Position may be one past the end.
    Sentence at_end = apply_edit(y, make(EditKind::kInsert, 7, "eh"));
    CHECK(at_end.tokens.back() == "eh");
  }

  SUBCASE("delete closes the gap") {
    Sentence out = apply_edit(y, make(EditKind::kDelete, 1));
    REQUIRE(out.size() == y.size() - 1);
    CHECK(out.tokens[1] == "do");
  }

  SUBCASE("bounds and argument validation") {
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kReplace, 7, "w")), std::out_of_range);
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kReplace, -1, "w")), std::out_of_range);
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kInsert, 8, "w")), std::out_of_range);
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kDelete, 7)), std::out_of_range);
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kReplace, 0)), std::invalid_argument);
    CHECK_THROWS_AS(apply_edit(y, make(EditKind::kInsert, 0)), std::invalid_argument);
    CHECK_THROWS_WITH_AS(apply_edit(y, make(EditKind::kSwapSelection, 0, {}, 1)),
                         "selection swaps apply to masks, not sentences",
                         std::invalid_argument);
  }
}

TEST_CASE("summarize renders compact op strings") {
  CHECK(summarize(make(EditKind::kReplace, 0, "which")) == "replace@0:which");
  CHECK(summarize(make(EditKind::kInsert, 3, "very")) == "insert@3:very");
  CHECK(summarize(make(EditKind::kDelete, 2)) == "delete@2");
  CHECK(summarize(make(EditKind::kSwapSelection, 1, {}, 4)) == "swap@1,4");
}

TEST_CASE("gibbs_word_distribution") {
  Sentence x = {"a"};

  SUBCASE("constant objective gives the uniform distribution") {
    std::vector<double> d = gibbs_word_distribution(
        constant_objective(), {"a"}, x, 0, EditKind::kReplace, {"p", "q", "r", "s"});
    REQUIRE(d.size() == 4);
    for (double p : d) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("singleton shortlist is certain") {
    std::vector<double> d = gibbs_word_distribution(
        constant_objective(), {"a"}, x, 0, EditKind::kReplace, {"only"});
    REQUIRE(d.size() == 1);
    CHECK(d[0] == doctest::Approx(1.0));
  }

  SUBCASE("softmax of log-scores, by hand") {
    // Scores 0.2 / 0.5 / 0.9 for the word placed at position 0, so the
    // distribution is {0.2, 0.5, 0.9} / 1.6.
    Objective o;
    o.components = {{"lookup",
                     [](const Sentence& y, const Sentence&) {
                       if (y.tokens[0] == "p") return 0.2;
                       if (y.tokens[0] == "q") return 0.5;
                       return 0.9;
                     },
                     1.0}};
    std::vector<double> d =
        gibbs_word_distribution(o, {"a"}, x, 0, EditKind::kReplace, {"p", "q", "r"});
    REQUIRE(d.size() == 3);
    CHECK(d[0] == doctest::Approx(0.2 / 1.6).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(0.5 / 1.6).epsilon(1e-9));
    CHECK(d[2] == doctest::Approx(0.9 / 1.6).epsilon(1e-9));
    CHECK(d[0] + d[1] + d[2] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("insert mode scores the lengthened sentence") {
    Objective o;
    o.components = {{"len",
                     [](const Sentence& y, const Sentence&) {
                       return y.tokens.back() == "long" ? 0.9 : 0.1;
                     },
                     1.0}};
    std::vector<double> d =
        gibbs_word_distribution(o, {"a"}, x, 1, EditKind::kInsert, {"long", "short"});
    CHECK(d[0] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(0.1).epsilon(1e-9));
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_WITH_AS(gibbs_word_distribution(constant_objective(), {"a"}, x, 0,
                                                 EditKind::kReplace, {}),
                         "gibbs over empty shortlist", std::invalid_argument);
    CHECK_THROWS_WITH_AS(gibbs_word_distribution(constant_objective(), {"a"}, x, 0,
                                                 EditKind::kDelete, {"p"}),
                         "gibbs mode must be replace or insert",
                         std::invalid_argument);
  }
}

TEST_CASE("propose_edit enumeration on a two-word vocabulary") {
  // Vocab {u, v}; constant objective makes every Gibbs distribution uniform,
  // so all proposal probabilities are exact fractions.
  NGramModel lm = uv_model();
  Objective o = constant_objective();
  Sentence x = {"u", "v"};
  EditConfig cfg;

  SUBCASE("single-word sentence: only replace and insert apply") {
    Sentence y = {"u"};
    std::mt19937_64 rng(7);
    std::map<std::string, int> tally;
    const int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
      auto [e, candidate] = propose_edit(o, y, x, lm, rng, cfg);
      tally[summarize(e)]++;
      CHECK(e.kind != EditKind::kDelete);
      if (e.kind == EditKind::kReplace) {
        CHECK(e.forward_log_prob == doctest::Approx(std::log(0.25)).epsilon(1e-12));
        // Reverse replace sees the same contexts: identical distribution.
        CHECK(e.backward_log_prob == doctest::Approx(std::log(0.25)).epsilon(1e-12));
        CHECK(candidate.size() == 1);
      } else {
        CHECK(e.forward_log_prob == doctest::Approx(std::log(0.125)).epsilon(1e-12));
        // Reverse of insert is delete on the 2-word candidate: 1/3 * 1/2.
        CHECK(e.backward_log_prob ==
              doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
        CHECK(candidate.size() == 2);
      }
    }
    // Six distinct outcomes with exact probabilities {1/4, 1/4, 1/8 x4}.
    REQUIRE(tally.size() == 6);
    for (const auto& [op, n] : tally) {
      double freq = static_cast<double>(n) / kDraws;
      double expected = op.rfind("replace", 0) == 0 ? 0.25 : 0.125;
      CAPTURE(op);
      CHECK(freq == doctest::Approx(expected).epsilon(0.16));  // +-0.02 absolute
      CHECK(std::abs(freq - expected) < 0.02);
    }
  }

  SUBCASE("two-word sentence: all three kinds, exact proposal probabilities") {
    Sentence y = {"u", "v"};
    std::mt19937_64 rng(11);
    bool saw_replace = false, saw_insert = false, saw_delete = false;
    for (int i = 0; i < 200; ++i) {
      auto [e, candidate] = propose_edit(o, y, x, lm, rng, cfg);
      switch (e.kind) {
        case EditKind::kReplace:
          saw_replace = true;
          CHECK(e.forward_log_prob ==
                doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-12));
          CHECK(e.backward_log_prob ==
                doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-12));
          break;
        case EditKind::kInsert:
          saw_insert = true;
          CHECK(e.forward_log_prob ==
                doctest::Approx(std::log(1.0 / 18.0)).epsilon(1e-12));
          CHECK(e.backward_log_prob ==
                doctest::Approx(std::log(1.0 / 9.0)).epsilon(1e-12));
          break;
        case EditKind::kDelete:
          saw_delete = true;
          CHECK(e.forward_log_prob ==
                doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
          // Reverse insert restores the deleted word: 1/2 kinds, 1/2 slots... ->
          // 1/2 * 1/2 * 1/2 = 1/8.
          CHECK(e.backward_log_prob ==
                doctest::Approx(std::log(1.0 / 8.0)).epsilon(1e-12));
          break;
        default:
          FAIL("unexpected kind");
      }
    }
    CHECK(saw_replace);
    CHECK(saw_insert);
    CHECK(saw_delete);
  }

  SUBCASE("deterministic under a fixed seed") {
    Sentence y = {"u", "v"};
    std::mt19937_64 r1(42), r2(42);
    auto [e1, c1] = propose_edit(o, y, x, lm, r1, cfg);
    auto [e2, c2] = propose_edit(o, y, x, lm, r2, cfg);
    CHECK(e1.kind == e2.kind);
    CHECK(e1.position == e2.position);
    CHECK(e1.word == e2.word);
    CHECK(e1.forward_log_prob == e2.forward_log_prob);
    CHECK(e1.backward_log_prob == e2.backward_log_prob);
    CHECK(c1 == c2);
  }

  SUBCASE("reserved symbols are never proposed as words") {
    Sentence y = {"u"};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
      auto [e, candidate] = propose_edit(o, y, x, lm, rng, cfg);
      if (e.word) {
        CHECK(*e.word != "<s>");
        CHECK(*e.word != "</s>");
        CHECK(*e.word != "<unk>");
      }
    }
  }

  SUBCASE("shortlist_k = 1 still proposes") {
    EditConfig tiny;
    tiny.shortlist_k = 1;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      auto [e, candidate] = propose_edit(o, {"u"}, x, lm, rng, tiny);
      // Word draws are certain, so only kind (1/2) and slot counts remain.
      double expected = e.kind == EditKind::kReplace ? std::log(0.5) : std::log(0.25);
      CHECK(e.forward_log_prob == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("propose_edit respects the enabled-op mask") {
  NGramModel lm = uv_model();
  Objective o = constant_objective();
  Sentence x = {"u", "v"};

  SUBCASE("delete-only on a long sentence floors the reverse probability") {
    EditConfig del_only;
    del_only.enabled = {false, false, true};
    std::mt19937_64 rng(1);
    auto [e, candidate] = propose_edit(o, {"u", "v"}, x, lm, rng, del_only);
    CHECK(e.kind == EditKind::kDelete);
    CHECK(e.forward_log_prob == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    // The one-word candidate admits no enabled op, so the reverse edit is
    // unreachable and takes the floor.
    CHECK(e.backward_log_prob == doctest::Approx(std::log(1e-12)).epsilon(1e-12));
  }

  SUBCASE("delete-only on a single word has no applicable edit") {
    EditConfig del_only;
    del_only.enabled = {false, false, true};
    std::mt19937_64 rng(1);
    CHECK_THROWS_WITH_AS(propose_edit(o, {"u"}, x, lm, rng, del_only),
                         "no applicable edit", std::runtime_error);
  }

  SUBCASE("everything disabled throws") {
    EditConfig none;
    none.enabled = {false, false, false};
    std::mt19937_64 rng(1);
    CHECK_THROWS_WITH_AS(propose_edit(o, {"u"}, x, lm, rng, none),
                         "no applicable edit", std::runtime_error);
  }

  SUBCASE("replace-only never changes the length") {
    EditConfig rep_only;
    rep_only.enabled = {true, false, false};
    std::mt19937_64 rng(9);
    Sentence y = {"u", "v"};
    for (int i = 0; i < 100; ++i) {
      auto [e, candidate] = propose_edit(o, y, x, lm, rng, rep_only);
      CHECK(e.kind == EditKind::kReplace);
      CHECK(candidate.size() == y.size());
    }
  }
}

TEST_CASE("SelectionMask") {
  Sentence src = tokenize("a b c d, e");
  REQUIRE(src.tokens == std::vector<Token>{"a", "b", "c", "d", ",", "e"});

  SUBCASE("first_k selects the leading eligible words") {
    SelectionMask m = SelectionMask::first_k(src, 2);
    CHECK(m.eligible_count() == 5);
    CHECK(m.eligible[4] == 0);  // the comma
    CHECK(m.realize().tokens == std::vector<Token>{"a", "b"});
    CHECK(m.budget_k == 2);
  }

  SUBCASE("degenerate budgets throw") {
    CHECK_THROWS_WITH_AS(SelectionMask::first_k(src, 0), "degenerate mask",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(SelectionMask::first_k(src, 5), "degenerate mask",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(SelectionMask::first_k(src, 9), "degenerate mask",
                         std::runtime_error);
    CHECK_THROWS_AS(SelectionMask::first_k({",", "!"}, 1), std::runtime_error);
  }

  SUBCASE("propose_swap is symmetric and budget-preserving") {
    SelectionMask m = SelectionMask::first_k(src, 2);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
      auto [e, next] = propose_swap(m, rng);
      CHECK(e.kind == EditKind::kSwapSelection);
      // 2 selected, 3 unselected eligible words: P = 1/(2*3) both ways.
      CHECK(e.forward_log_prob == doctest::Approx(-std::log(6.0)).epsilon(1e-12));
      CHECK(e.backward_log_prob == e.forward_log_prob);
      CHECK(next.realize().size() == 2);
      CHECK(m.selected[static_cast<std::size_t>(e.position)] == 1);
      CHECK(next.selected[static_cast<std::size_t>(e.position)] == 0);
      CHECK(next.selected[static_cast<std::size_t>(e.position2)] == 1);
      CHECK(next.eligible[4] == 0);
      m = next;
    }
  }

  SUBCASE("swap walk reaches every 2-of-5 subset") {
    SelectionMask m = SelectionMask::first_k(src, 2);
    std::mt19937_64 rng(17);
    std::set<std::string> seen;
    for (int i = 0; i < 2000; ++i) {
      seen.insert(detokenize(m.realize()));
      auto [e, next] = propose_swap(m, rng);
      m = next;
    }
    CHECK(seen.size() == 10);  // C(5,2)
  }

  SUBCASE("fully selected or empty masks cannot swap") {
    SelectionMask all;
    all.source = {"a", "b"};
    all.selected = {1, 1};
    all.eligible = {1, 1};
    all.budget_k = 2;
    std::mt19937_64 rng(1);
    CHECK_THROWS_WITH_AS(propose_swap(all, rng), "degenerate mask",
                         std::runtime_error);
  }
}
