#include "emodeng/tokenizer.hpp"

#include <cctype>

#include "emodeng/utf8.hpp"

namespace emodeng {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "word";
    case TokenKind::Suffix: return "suffix";
    case TokenKind::Hyphen: return "hyphen";
    case TokenKind::Punct: return "punct";
    case TokenKind::Foreign: return "foreign";
    case TokenKind::Number: return "number";
  }
  return "?";
}

namespace {

constexpr std::string_view kRightQuote = "’";

bool letter_at(std::string_view text, std::size_t pos) {
  return pos < text.size() && utf8::is_letter(utf8::decode(text, pos));
}

bool digit_at(std::string_view text, std::size_t pos) {
  return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
}

// Length of an apostrophe at pos, 0 if there is none.
std::size_t apostrophe_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  if (text[pos] == '\'') return 1;
  if (text.substr(pos, kRightQuote.size()) == kRightQuote) return kRightQuote.size();
  return 0;
}

std::size_t letters_end(std::string_view text, std::size_t pos) {
  while (letter_at(text, pos)) pos += utf8::sequence_length(text, pos);
  return pos;
}

class Tokenizer {
 public:
  Tokenizer(std::string_view text, const OffsetMap& offsets, const TokenizerConfig& config)
      : text_(text), offsets_(offsets), config_(config) {}

  std::vector<Token> run() {
    std::size_t i = 0;
    bool space = false;
    while (i < text_.size()) {
      unsigned char c = static_cast<unsigned char>(text_[i]);
      if (std::isspace(c)) {
        space = true;
        ++i;
        continue;
      }
      std::size_t start = i;
      if (text_.substr(i, kForeignOpen.size()) == kForeignOpen) {
        i = foreign(i, space);
      } else if (letter_at(text_, i)) {
        i = word(i, space);
      } else if (digit_at(text_, i)) {
        while (digit_at(text_, i) ||
               ((text_[i] == '.' || text_[i] == ',') && digit_at(text_, i + 1)))
          ++i;
        emit(TokenKind::Number, start, i, space);
      } else if (std::size_t n = apostrophe_at(text_, i); n && !tokens_.empty() &&
                                                          !space &&
                                                          tokens_.back().kind == TokenKind::Word) {
        i = suffix(i, n, space);
      } else if (text_[i] == '-' && i > 0 && letter_at(text_, i + 1) && !tokens_.empty() &&
                 !space && tokens_.back().kind == TokenKind::Word) {
        ++i;
        emit(TokenKind::Hyphen, start, i, space);
      } else {
        i += utf8::sequence_length(text_, i);
        emit(TokenKind::Punct, start, i, space);
      }
      space = false;
    }
    return std::move(tokens_);
  }

 private:
  void emit(TokenKind kind, std::size_t begin, std::size_t end, bool space) {
    Token t;
    t.surface = std::string(text_.substr(begin, end - begin));
    t.kind = kind;
    t.norm = {begin, end};
    t.span = {offsets_.to_original(begin), offsets_.to_original(end)};
    t.space_before = space;
    tokens_.push_back(std::move(t));
  }

  std::size_t foreign(std::size_t start, bool space) {
    std::size_t close = text_.find(kForeignClose, start + kForeignOpen.size());
    std::size_t end = close == std::string_view::npos ? text_.size() : close + kForeignClose.size();
    emit(TokenKind::Foreign, start, end, space);
    std::string_view inner = text_.substr(start + kForeignOpen.size(),
                                          (close == std::string_view::npos ? end : close) -
                                              start - kForeignOpen.size());
    std::size_t colon = inner.find(':');
    if (colon != std::string_view::npos && colon > 0 && letters_end(inner, 0) == colon)
      tokens_.back().lang = std::string(inner.substr(0, colon));
    return end;
  }

  std::size_t word(std::size_t start, bool space) {
    std::size_t end = letters_end(text_, start);
    // Word-internal apostrophes not followed by a suffix letter stay in the
    // word (o'clock); 'd 't 's at the word end split off.
    while (true) {
      std::size_t n = apostrophe_at(text_, end);
      if (!n || !letter_at(text_, end + n)) break;
      std::size_t after = letters_end(text_, end + n);
      if (after - (end + n) == 1) {
        char s = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[end + n])));
        if (s == 'd' || s == 't' || s == 's') break;
      }
      end = after;
    }
    if (end < text_.size() && text_[end] == '.') {
      std::string candidate = utf8::lower(text_.substr(start, end + 1 - start));
      if (config_.abbreviations.count(candidate)) {
        emit(TokenKind::Word, start, end + 1, space);
        return end + 1;
      }
    }
    emit(TokenKind::Word, start, end, space);
    return end;
  }

  std::size_t suffix(std::size_t start, std::size_t n, bool space) {
    std::size_t end = start + n;
    if (letter_at(text_, end) && letters_end(text_, end) == end + 1) {
      char s = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[end])));
      if (s == 'd' || s == 't' || s == 's') ++end;
    }
    emit(TokenKind::Suffix, start, end, space);
    return end;
  }

  std::string_view text_;
  const OffsetMap& offsets_;
  const TokenizerConfig& config_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text, const OffsetMap& offsets,
                            const TokenizerConfig& config) {
  return Tokenizer(text, offsets, config).run();
}

std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config) {
  OffsetMap identity = OffsetMap::identity(text.size());
  return Tokenizer(text, identity, config).run();
}

std::vector<std::string> foreign_words(const Token& token) {
  std::string_view inner = token.surface;
  if (inner.substr(0, kForeignOpen.size()) == kForeignOpen) inner.remove_prefix(kForeignOpen.size());
  if (inner.size() >= kForeignClose.size() &&
      inner.substr(inner.size() - kForeignClose.size()) == kForeignClose)
    inner.remove_suffix(kForeignClose.size());
  if (!token.lang.empty()) inner.remove_prefix(token.lang.size() + 1);
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < inner.size()) {
    if (!letter_at(inner, i)) {
      i += utf8::sequence_length(inner, i);
      continue;
    }
    std::size_t end = letters_end(inner, i);
    words.emplace_back(inner.substr(i, end - i));
    i = end;
  }
  return words;
}

}  // namespace emodeng
