#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "salt/text.hpp"

namespace salt {

/// Static word vectors loaded from a text file. Each data line is a token
/// followed by the vector components, single-space separated; an optional
/// first header line with exactly two integer fields (count, dim) is skipped.
struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<Token, std::vector<double>> vectors;

  static EmbeddingTable load(const std::string& path);

  const std::vector<double>* find(const Token& token) const {
    auto it = vectors.find(token);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

/// Arithmetic mean of in-table token vectors; zero vector if none are in table.
std::vector<double> sentence_embedding(const EmbeddingTable& table, const Sentence& s);

/// u.v / (|u||v|); 0 when either norm is 0. Throws on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

struct SemanticParams {
  double beta = 1.0;   // exponent on the sentence-similarity factor
  double gamma = 1.0;  // exponent on the keyword-coverage factor
  double floor = 1e-6;
};

/// Positive semantic similarity in (0, 1]:
///   clamp(cos(mean(y), mean(x)))^beta * clamp(min_k max_w cos(k, w))^gamma
/// where the keyword factor is 1 when keywords is empty. Negative cosines are
/// clamped to the floor so the factor stays positive.
double semantic_score(const EmbeddingTable& table, const Sentence& y,
                      const Sentence& x, const std::vector<Token>& keywords,
                      const SemanticParams& params = {});

}  // namespace salt
