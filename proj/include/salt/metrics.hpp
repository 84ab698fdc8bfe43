#pragma once

#include <cstddef>
#include <vector>

#include "salt/text.hpp"

namespace salt {

/// BLEU in [0,1]: brevity penalty times the geometric mean of clipped n-gram
/// precisions for n = 1..max_n. Clipping takes the per-n-gram maximum count
/// over the references; a precision with zero matches becomes smoothing_eps;
/// orders the candidate is too short to produce are skipped. The brevity
/// penalty uses the reference length closest to the candidate's (ties to the
/// shorter). Empty candidate scores 0. Throws unless max_n is in [1,4] and
/// references is non-empty.
double bleu(const Sentence& candidate, const std::vector<Sentence>& references,
            int max_n = 4, double smoothing_eps = 1e-9);

/// alpha * bleu(output, [reference]) - (1 - alpha) * bleu(output, [input]);
/// rewards matching the reference while penalizing copying the input.
/// Throws unless alpha is in [0,1].
double ibleu(const Sentence& output, const Sentence& reference, const Sentence& input,
             double alpha = 0.9);

struct CorpusEval {
  double bleu = 0.0;
  double ibleu = 0.0;
  std::size_t n = 0;
};

/// Means of sentence-level BLEU-4 (output vs reference) and iBLEU over the
/// three parallel corpora. Throws on a line-count mismatch or empty corpora.
CorpusEval corpus_eval(const std::vector<Sentence>& inputs,
                       const std::vector<Sentence>& outputs,
                       const std::vector<Sentence>& references, double alpha = 0.9);

}  // namespace salt
