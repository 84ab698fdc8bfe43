#include "salt/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace salt {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool is_integer_field(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings file: " + path);

  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (first_content_line && fields.size() == 2 && is_integer_field(fields[0]) &&
        is_integer_field(fields[1])) {
      first_content_line = false;  // header: count, dim
      continue;
    }
    first_content_line = false;
    if (fields.size() < 2) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                               ": expected token and vector");
    }
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                 ": bad float '" + fields[i] + "'");
      }
      vec.push_back(v);
    }
    if (table.dim == 0) {
      table.dim = static_cast<int>(vec.size());
    } else if (static_cast<int>(vec.size()) != table.dim) {
      throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                               ": dimension " + std::to_string(vec.size()) +
                               " does not match " + std::to_string(table.dim));
    }
    table.vectors[fields[0]] = std::move(vec);
  }
  if (table.vectors.empty()) {
    throw std::runtime_error("embeddings file is empty: " + path);
  }
  return table;
}

std::vector<double> sentence_embedding(const EmbeddingTable& table, const Sentence& s) {
  std::vector<double> mean(static_cast<std::size_t>(table.dim), 0.0);
  int hits = 0;
  for (const Token& t : s.tokens) {
    if (const std::vector<double>* v = table.find(t)) {
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
      ++hits;
    }
  }
  if (hits > 0) {
    for (double& m : mean) m /= static_cast<double>(hits);
  }
  return mean;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double semantic_score(const EmbeddingTable& table, const Sentence& y,
                      const Sentence& x, const std::vector<Token>& keywords,
                      const SemanticParams& params) {
  auto clamp01 = [&](double v) { return std::clamp(v, params.floor, 1.0); };

  std::vector<double> ey = sentence_embedding(table, y);
  std::vector<double> ex = sentence_embedding(table, x);
  double sent_part = clamp01(cosine(ey, ex));

  double kw_part = 1.0;
  if (!keywords.empty()) {
    std::vector<double> zero(static_cast<std::size_t>(table.dim), 0.0);
    double worst = 1.0;
    for (const Token& k : keywords) {
      const std::vector<double>* vk = table.find(k);
      double best = -1.0;
      for (const Token& w : y.tokens) {
        const std::vector<double>* vw = table.find(w);
        double c = cosine(vk ? *vk : zero, vw ? *vw : zero);
        best = std::max(best, c);
      }
      if (y.empty()) best = 0.0;
      worst = std::min(worst, best);
    }
    kw_part = clamp01(worst);
  }
  return std::pow(sent_part, params.beta) * std::pow(kw_part, params.gamma);
}

}  // namespace salt
