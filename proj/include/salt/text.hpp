#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace salt {

using Token = std::string;

/// Ordered token sequence; the search state and the input it is scored against.
struct Sentence {
  std::vector<Token> tokens;

  Sentence() = default;
  explicit Sentence(std::vector<Token> t) : tokens(std::move(t)) {}
  Sentence(std::initializer_list<Token> t) : tokens(t) {}

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const Sentence&) const = default;
};

/// True when every character of the token is one of .,!?;:"'()-
bool is_punctuation_token(std::string_view token);

/// True when every character is an ASCII letter.
bool is_alphabetic_token(std::string_view token);

/// Lowercases, splits on whitespace, and splits each maximal run of
/// punctuation characters into its own token. Never produces empty tokens.
Sentence tokenize(std::string_view text);

/// Joins tokens with single spaces. No space is placed before a
/// punctuation-only token unless the previous token is also punctuation-only
/// (keeping tokenize(detokenize(s)) stable).
std::string detokenize(const Sentence& s);

/// Dense token <-> id map with reserved BOS/EOS/UNK symbols at ids 0/1/2.
class Vocabulary {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;
  static constexpr std::string_view kBosSurface = "<s>";
  static constexpr std::string_view kEosSurface = "</s>";
  static constexpr std::string_view kUnkSurface = "<unk>";

  Vocabulary();

  /// Inserts the token if absent; returns its id either way.
  int add(const Token& token);

  /// Id of a known token, kUnk otherwise.
  int id(const Token& token) const;

  const Token& token(int id) const;
  bool contains(const Token& token) const { return token_to_id_.contains(token); }
  int size() const { return static_cast<int>(id_to_token_.size()); }

  static bool is_reserved(int id) { return id >= 0 && id <= kUnk; }

 private:
  std::vector<Token> id_to_token_;
  std::unordered_map<Token, int> token_to_id_;
};

/// One sentence per line; blank lines are skipped.
std::vector<Sentence> read_sentence_file(const std::string& path);

}  // namespace salt
