#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "emodeng/typography.hpp"

namespace emodeng {

enum class TokenKind { Word, Suffix, Hyphen, Punct, Foreign, Number };

std::string_view to_string(TokenKind kind);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::Word;
  Span span;  // bytes of the original text
  Span norm;  // bytes of the normalized text
  std::string lang;  // foreign spans only
  // Whitespace separates this token from the previous one.
  bool space_before = false;
};

struct TokenizerConfig {
  // Lowercased abbreviations including their final period ("etc.").
  std::unordered_set<std::string> abbreviations{"etc."};
};

// Foreign-quotation fences: ⟦lang:text⟧.
inline constexpr std::string_view kForeignOpen = "⟦";
inline constexpr std::string_view kForeignClose = "⟧";

std::vector<Token> tokenize(std::string_view text, const OffsetMap& offsets,
                            const TokenizerConfig& config = {});
// Identity offsets.
std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config = {});

// Words of a foreign span, without the fence and language tag.
std::vector<std::string> foreign_words(const Token& token);

}  // namespace emodeng
