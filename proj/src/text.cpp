#include "salt/text.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace salt {

namespace {

constexpr std::string_view kPunctuation = ".,!?;:\"'()-";

bool is_punct_char(char c) { return kPunctuation.find(c) != std::string_view::npos; }

bool is_space_char(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!is_punct_char(c)) return false;
  }
  return true;
}

bool is_alphabetic_token(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (std::isalpha(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

Sentence tokenize(std::string_view text) {
  Sentence out;
  std::string current;
  bool current_is_punct = false;
  auto flush = [&] {
    if (!current.empty()) {
      out.tokens.push_back(current);
      current.clear();
    }
  };
  for (char raw : text) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (is_space_char(c)) {
      flush();
      continue;
    }
    bool punct = is_punct_char(c);
    if (!current.empty() && punct != current_is_punct) flush();
    current_is_punct = punct;
    current.push_back(c);
  }
  flush();
  return out;
}

std::string detokenize(const Sentence& s) {
  std::string out;
  bool prev_punct = false;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    bool punct = is_punctuation_token(s.tokens[i]);
    if (i > 0 && (!punct || prev_punct)) out.push_back(' ');
    out += s.tokens[i];
    prev_punct = punct;
  }
  return out;
}

Vocabulary::Vocabulary() {
  add(Token(kBosSurface));
  add(Token(kEosSurface));
  add(Token(kUnkSurface));
}

int Vocabulary::add(const Token& token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  int id = static_cast<int>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

int Vocabulary::id(const Token& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const Token& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("vocabulary id out of range");
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<Sentence> read_sentence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    Sentence s = tokenize(line);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace salt
