#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emodeng/annotation.hpp"
#include "emodeng/lexicon.hpp"
#include "emodeng/morph_engine.hpp"

namespace emodeng {

// A conjunction of tests on one token, e.g. <V+Tense=INF !V+AUX>.
struct TokenTest {
  enum class Kind {
    TokenKind,   // word, hyphen, punct, suffix, number, foreign
    Reading,     // POS[|POS](+KEY[=v|v])*
    Finite,      // a finite verb reading and no nominal one
    Known,
    Tier,        // tier=a|b
    Text,        // text=a|b, case-insensitive
    Prefix,      // prefix=x
    Ends,        // ends=x
    Capitalized, // cap
    Genitive,    // gen: unmarked saxon genitive candidate
  };
  Kind kind = Kind::Reading;
  bool negated = false;
  TokenKind token_kind = TokenKind::Word;
  std::vector<Pos> pos;  // empty: any category
  std::vector<std::pair<std::string, std::vector<std::string>>> traits;
  std::vector<std::string> values;
};

struct PatternAtom {
  std::vector<std::string> literals;  // any of these surfaces
  std::vector<std::vector<TokenTest>> test_sets;  // or any of these conjunctions
};

struct PatternItem {
  PatternAtom atom;
  std::string label;
  bool context = false;   // @: matched but not rewritten
  bool negative = false;  // !@: zero-width, must not match
  int min = 1;
  int max = 1;
};

struct TemplatePart {
  enum class Kind { Literal, Capture, Call };
  Kind kind = Kind::Literal;
  std::string text;  // literal, capture label or function name
  std::vector<std::string> args;  // "$label" or bare words
};

struct SyntaxRule {
  std::string id;
  int priority = 0;
  std::vector<PatternItem> pattern;
  std::vector<TemplatePart> rewrite;
  std::vector<std::vector<std::string>> exceptions;
  std::optional<std::string> when;  // config flag gating the rewrite
  std::vector<Trait> annotate;
};

std::vector<SyntaxRule> parse_syntax_rules(std::string_view text, const std::string& source = {});
std::vector<SyntaxRule> load_syntax_rules(const std::filesystem::path& path);

struct RewriteEdit {
  std::size_t begin = 0;  // token range [begin, end)
  std::size_t end = 0;
  std::vector<std::string> replacement;
  std::string rule_id;
  int priority = 0;
  // False for annotation-only edits: the span keeps its transcriptions.
  bool rewrite = true;
  std::string note;
  std::vector<Trait> annotate;
  std::vector<Reading> readings;
};

struct SyntaxContext {
  const Lexicon& lexicon;
  const MorphEngine& morph;
  std::set<std::string> flags;
};

class SyntaxEngine {
 public:
  explicit SyntaxEngine(std::vector<SyntaxRule> rules);

  const std::vector<SyntaxRule>& rules() const { return rules_; }
  const SyntaxRule* find(std::string_view id) const;

  // Non-overlapping edits, resolved by priority, then leftmost, then
  // longest, in token order.
  std::vector<RewriteEdit> match_all(const std::vector<AnnotatedToken>& stream,
                                     const SyntaxContext& ctx) const;
  // Matches of one rule alone, before conflict resolution.
  std::vector<RewriteEdit> match_rule(const SyntaxRule& rule,
                                      const std::vector<AnnotatedToken>& stream,
                                      const SyntaxContext& ctx) const;

 private:
  std::vector<SyntaxRule> rules_;
};

// Text of tokens [begin, end) with their inner gaps.
std::string render_tokens(const std::vector<AnnotatedToken>& stream, std::size_t begin,
                          std::size_t end);

}  // namespace emodeng
