#include "emodeng/syntax_engine.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "emodeng/error.hpp"
#include "emodeng/utf8.hpp"

namespace emodeng {

namespace {

// ---------------------------------------------------------------------------
// Rules file parsing

class PatternParser {
 public:
  PatternParser(std::string_view text, std::size_t line, std::size_t column,
                const std::string& source)
      : s_(text), line_(line), col0_(column), source_(source) {}

  std::vector<PatternItem> items() {
    std::vector<PatternItem> out;
    skip_space();
    while (i_ < s_.size()) {
      out.push_back(item());
      skip_space();
    }
    if (out.empty()) fail("empty pattern");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + i_, source_);
  }

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  PatternItem item() {
    PatternItem it;
    if (s_.compare(i_, 2, "!@") == 0) {
      it.negative = true;
      i_ += 2;
    } else if (s_[i_] == '@') {
      it.context = true;
      ++i_;
    }
    std::size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    if (j > i_ && j < s_.size() && s_[j] == ':') {
      it.label = std::string(s_.substr(i_, j - i_));
      i_ = j + 1;
    }
    it.atom = atom();
    if (i_ < s_.size() && s_[i_] == '?') {
      it.min = 0;
      ++i_;
    } else if (i_ < s_.size() && s_[i_] == '{') {
      std::size_t close = s_.find('}', i_);
      if (close == std::string_view::npos) fail("unterminated quantifier");
      std::string body(s_.substr(i_ + 1, close - i_ - 1));
      std::size_t comma = body.find(',');
      try {
        it.min = std::stoi(body.substr(0, comma));
        it.max = comma == std::string::npos ? it.min : std::stoi(body.substr(comma + 1));
      } catch (const std::exception&) {
        fail("bad quantifier");
      }
      if (it.min < 0 || it.max < it.min || it.max < 1) fail("bad quantifier bounds");
      i_ = close + 1;
    }
    if (it.negative && (it.min != 1 || it.max != 1 || !it.label.empty()))
      fail("negative context takes no label or quantifier");
    return it;
  }

  std::string literal() {
    ++i_;  // opening quote
    std::size_t close = s_.find('"', i_);
    if (close == std::string_view::npos) fail("unterminated literal");
    std::string lit(s_.substr(i_, close - i_));
    i_ = close + 1;
    return utf8::lower(lit);
  }

  PatternAtom atom() {
    PatternAtom a;
    if (i_ >= s_.size()) fail("missing pattern atom");
    if (s_[i_] == '"') {
      a.literals.push_back(literal());
    } else if (s_[i_] == '<') {
      a.test_sets.push_back(tests());
    } else if (s_[i_] == '(') {
      ++i_;
      while (true) {
        skip_space();
        if (i_ >= s_.size()) fail("unterminated alternation");
        if (s_[i_] == '"')
          a.literals.push_back(literal());
        else if (s_[i_] == '<')
          a.test_sets.push_back(tests());
        else
          fail("expected literal or <tests>");
        skip_space();
        if (i_ < s_.size() && s_[i_] == '|') {
          ++i_;
          continue;
        }
        if (i_ < s_.size() && s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected '|' or ')'");
      }
    } else {
      fail("expected literal, (alternation) or <tests>");
    }
    return a;
  }

  static std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      std::size_t p = s.find(sep, start);
      out.emplace_back(s.substr(start, p == std::string_view::npos ? s.npos : p - start));
      if (p == std::string_view::npos) break;
      start = p + 1;
    }
    return out;
  }

  std::vector<TokenTest> tests() {
    std::size_t close = s_.find('>', i_);
    if (close == std::string_view::npos) fail("unterminated <tests>");
    std::istringstream words{std::string(s_.substr(i_ + 1, close - i_ - 1))};
    std::vector<TokenTest> out;
    std::string w;
    while (words >> w) out.push_back(test(w));
    if (out.empty()) fail("empty <tests>");
    i_ = close + 1;
    return out;
  }

  TokenTest test(std::string w) {
    TokenTest t;
    if (!w.empty() && w[0] == '!') {
      t.negated = true;
      w.erase(0, 1);
    }
    static const std::map<std::string, TokenKind> kKinds{
        {"word", TokenKind::Word},     {"hyphen", TokenKind::Hyphen},
        {"punct", TokenKind::Punct},   {"suffix", TokenKind::Suffix},
        {"number", TokenKind::Number}, {"foreign", TokenKind::Foreign}};
    if (auto k = kKinds.find(w); k != kKinds.end()) {
      t.kind = TokenTest::Kind::TokenKind;
      t.token_kind = k->second;
      return t;
    }
    if (w == "finite") {
      t.kind = TokenTest::Kind::Finite;
      return t;
    }
    if (w == "known" || w == "unknown") {
      t.kind = TokenTest::Kind::Known;
      if (w == "unknown") t.negated = !t.negated;
      return t;
    }
    if (w == "cap") {
      t.kind = TokenTest::Kind::Capitalized;
      return t;
    }
    if (w == "gen") {
      t.kind = TokenTest::Kind::Genitive;
      return t;
    }
    static const std::map<std::string, TokenTest::Kind> kValued{
        {"tier", TokenTest::Kind::Tier},
        {"text", TokenTest::Kind::Text},
        {"prefix", TokenTest::Kind::Prefix},
        {"ends", TokenTest::Kind::Ends}};
    if (std::size_t eq = w.find('='); eq != std::string::npos) {
      if (auto k = kValued.find(w.substr(0, eq)); k != kValued.end()) {
        t.kind = k->second;
        for (auto& v : split(w.substr(eq + 1), '|'))
          t.values.push_back(k->second == TokenTest::Kind::Tier ? v : utf8::lower(v));
        return t;
      }
    }
    t.kind = TokenTest::Kind::Reading;
    auto parts = split(w, '+');
    for (const auto& code : split(parts[0], '|')) {
      if (code == "*") continue;
      auto pos = parse_pos(code);
      if (!pos) fail("unknown test or category code '" + code + "'");
      t.pos.push_back(*pos);
    }
    for (std::size_t k = 1; k < parts.size(); ++k) {
      std::size_t eq = parts[k].find('=');
      if (eq == std::string::npos)
        t.traits.emplace_back(parts[k], std::vector<std::string>{});
      else
        t.traits.emplace_back(parts[k].substr(0, eq), split(parts[k].substr(eq + 1), '|'));
    }
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_;
  std::size_t col0_;
  const std::string& source_;
};

std::vector<TemplatePart> parse_template(std::string_view s, std::size_t line, std::size_t col,
                                         const std::string& source) {
  std::vector<TemplatePart> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(msg, line, col + i, source); };
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    TemplatePart p;
    if (s[i] == '"') {
      std::size_t close = s.find('"', i + 1);
      if (close == std::string_view::npos) fail("unterminated literal");
      p.kind = TemplatePart::Kind::Literal;
      p.text = std::string(s.substr(i + 1, close - i - 1));
      i = close + 1;
    } else if (s[i] == '$') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      if (j == i + 1) fail("empty capture reference");
      p.kind = TemplatePart::Kind::Capture;
      p.text = std::string(s.substr(i + 1, j - i - 1));
      i = j;
    } else {
      std::size_t open = s.find('(', i);
      std::size_t close = s.find(')', i);
      if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        fail("expected \"literal\", $capture or function(args)");
      p.kind = TemplatePart::Kind::Call;
      p.text = std::string(s.substr(i, open - i));
      std::string args(s.substr(open + 1, close - open - 1));
      std::istringstream in(args);
      std::string a;
      while (std::getline(in, a, ',')) {
        auto b = a.find_first_not_of(" \t");
        auto e = a.find_last_not_of(" \t");
        if (b == std::string::npos) fail("empty argument");
        p.args.push_back(a.substr(b, e - b + 1));
      }
      i = close + 1;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> literal_sequence(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while ((i = s.find('"', i)) != std::string_view::npos) {
    std::size_t close = s.find('"', i + 1);
    if (close == std::string_view::npos) break;
    out.push_back(utf8::lower(s.substr(i + 1, close - i - 1)));
    i = close + 1;
  }
  return out;
}

const std::set<std::string>& known_functions() {
  static const std::set<std::string> kFns{"join", "genitive", "gen_s", "plural_en",
                                          "participle", "inflect", "be_agree", "do_support",
                                          "base"};
  return kFns;
}

// `line` locates the rule header, `rewrite_line` its rewrite: directive.
void validate_rule(const SyntaxRule& r, std::size_t line, std::size_t rewrite_line, const std::string& source) {
  std::set<std::string> labels;
  for (const auto& it : r.pattern)
    if (!it.label.empty()) labels.insert(it.label);
  auto check = [&](const std::string& label) {
    if (!labels.count(label))
      throw ParseError("rule " + r.id + ": unknown capture $" + label, rewrite_line, 1, source);
  };
  for (const auto& p : r.rewrite) {
    if (p.kind == TemplatePart::Kind::Capture) check(p.text);
    if (p.kind == TemplatePart::Kind::Call) {
      if (!known_functions().count(p.text))
        throw ParseError("rule " + r.id + ": unknown function " + p.text, rewrite_line, 1, source);
      for (const auto& a : p.args)
        if (!a.empty() && a[0] == '$') check(a.substr(1));
    }
  }
  bool consumes = std::any_of(r.pattern.begin(), r.pattern.end(),
                              [](const PatternItem& it) { return !it.context && !it.negative; });
  if (!consumes) throw ParseError("rule " + r.id + ": nothing to rewrite", line, 1, source);
}

}  // namespace

std::vector<SyntaxRule> parse_syntax_rules(std::string_view text, const std::string& source) {
  std::vector<SyntaxRule> rules;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::size_t rule_line = 0;
  std::size_t rewrite_line = 0;
  bool has_match = false;
  auto finish = [&] {
    if (rules.empty()) return;
    if (!has_match) throw ParseError("rule " + rules.back().id + " has no match:", rule_line, 1, source);
    validate_rule(rules.back(), rule_line, rewrite_line ? rewrite_line : rule_line, source);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t indent = raw.find_first_not_of(" \t");
    if (indent == std::string::npos || raw[indent] == '#') continue;
    std::string_view line = std::string_view(raw).substr(indent);
    std::size_t col = indent + 1;

    if (line.rfind("rule ", 0) == 0) {
      finish();
      std::istringstream words{std::string(line)};
      std::string kw, id, prio_kw;
      int prio = 0;
      words >> kw >> id >> prio_kw;
      if (id.empty() || prio_kw != "priority" || !(words >> prio))
        throw ParseError("expected 'rule <id> priority <n>'", line_no, col, source);
      for (const auto& r : rules)
        if (r.id == id) throw ParseError("duplicate rule id " + id, line_no, col, source);
      rules.push_back({});
      rules.back().id = id;
      rules.back().priority = prio;
      rule_line = line_no;
      rewrite_line = 0;
      has_match = false;
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("expected 'key: value'", line_no, col, source);
    if (rules.empty()) throw ParseError("directive outside a rule", line_no, col, source);
    std::string key(line.substr(0, colon));
    std::string_view value = line.substr(colon + 1);
    std::size_t vcol = col + colon + 1;
    SyntaxRule& r = rules.back();
    if (key == "match") {
      r.pattern = PatternParser(value, line_no, vcol, source).items();
      has_match = true;
    } else if (key == "rewrite") {
      r.rewrite = parse_template(value, line_no, vcol, source);
      rewrite_line = line_no;
    } else if (key == "except") {
      auto seq = literal_sequence(value);
      if (seq.empty()) throw ParseError("empty exception", line_no, vcol, source);
      r.exceptions.push_back(std::move(seq));
    } else if (key == "when") {
      std::istringstream w{std::string(value)};
      std::string flag;
      w >> flag;
      r.when = flag;
    } else if (key == "annotate") {
      std::istringstream w{std::string(value)};
      std::string t;
      while (w >> t) {
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
          r.annotate.push_back({t, std::nullopt});
        else
          r.annotate.push_back({t.substr(0, eq), t.substr(eq + 1)});
      }
    } else {
      throw ParseError("unknown directive '" + key + "'", line_no, col, source);
    }
  }
  finish();
  return rules;
}

std::vector<SyntaxRule> load_syntax_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open syntax rules " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_syntax_rules(buf.str(), path.string());
}

std::string render_tokens(const std::vector<AnnotatedToken>& stream, std::size_t begin,
                          std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += stream[i].gap;
    out += stream[i].transcription;
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Matching

std::string fold(std::string_view surface) {
  std::string s = utf8::lower(surface);
  constexpr std::string_view kRightQuote = "’";
  for (std::size_t p = s.find(kRightQuote); p != std::string::npos; p = s.find(kRightQuote, p))
    s.replace(p, kRightQuote.size(), "'");
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool reading_matches(const Reading& r, const TokenTest& t) {
  if (!t.pos.empty() && std::find(t.pos.begin(), t.pos.end(), r.features.pos()) == t.pos.end())
    return false;
  for (const auto& [key, values] : t.traits) {
    if (values.empty()) {
      if (!r.features.has(key)) return false;
      continue;
    }
    auto v = r.features.value(key);
    if (!v || std::find(values.begin(), values.end(), *v) == values.end()) return false;
  }
  return true;
}

bool is_finite(const AnnotatedToken& t) {
  bool finite = false;
  for (const auto& r : t.readings) {
    Pos p = r.features.pos();
    if (p == Pos::N || p == Pos::PRO || p == Pos::DET || p == Pos::A) return false;
    if (p == Pos::V && (r.features.has_value("Tense", "PR") || r.features.has_value("Tense", "PT")))
      finite = true;
  }
  return finite;
}

bool is_hum(const FeatureSet& f) {
  return f.has("Hum") || f.has_value("Distribution", "Hum");
}

// Unknown word in -s over a plural stem (childrens), or any word in -s
// over a human or named stem; never when a verb or function-word reading
// exists (mans, his).
bool genitive_candidate(const AnnotatedToken& t, const SyntaxContext& ctx) {
  const std::string& s = t.token.surface;
  if (t.token.kind != TokenKind::Word || s.size() < 3 || !ends_with(s, "s") || ends_with(s, "ss"))
    return false;
  bool known_plural = false;
  for (const auto& r : t.readings) {
    if (r.features.pos() != Pos::N && r.features.pos() != Pos::A) return false;
    known_plural |= t.known && r.features.pos() == Pos::N && r.features.has_value("Nb", "p");
  }
  auto stem = ctx.lexicon.lookup(std::string_view(s).substr(0, s.size() - 1));
  for (const auto& a : stem) {
    const FeatureSet& f = a.entry.features;
    // An irregular plural plus s ("childrens", "Mens").
    if (f.pos() == Pos::N && f.has_value("Nb", "p")) return true;
    if (!t.known && f.pos() == Pos::PRO && f.has_value("Nb", "p")) return true;
    // A regular plural ("governors") is not a genitive.
    if (!known_plural && f.pos() == Pos::N && (is_hum(f) || a.provenance == kTierNamedEntities)) return true;
  }
  return false;
}

bool test_passes(const TokenTest& t, const AnnotatedToken& tok, const SyntaxContext& ctx) {
  bool r = false;
  switch (t.kind) {
    case TokenTest::Kind::TokenKind: r = tok.token.kind == t.token_kind; break;
    case TokenTest::Kind::Reading:
      r = std::any_of(tok.readings.begin(), tok.readings.end(),
                      [&](const Reading& rd) { return reading_matches(rd, t); });
      break;
    case TokenTest::Kind::Finite: r = is_finite(tok); break;
    case TokenTest::Kind::Known: r = tok.known; break;
    case TokenTest::Kind::Tier:
      r = std::find(t.values.begin(), t.values.end(), tok.tier) != t.values.end();
      break;
    case TokenTest::Kind::Text:
      r = std::find(t.values.begin(), t.values.end(), fold(tok.token.surface)) != t.values.end();
      break;
    case TokenTest::Kind::Prefix:
      r = std::any_of(t.values.begin(), t.values.end(),
                      [&](const std::string& v) { return fold(tok.token.surface).rfind(v, 0) == 0; });
      break;
    case TokenTest::Kind::Ends:
      r = std::any_of(t.values.begin(), t.values.end(),
                      [&](const std::string& v) { return ends_with(fold(tok.token.surface), v); });
      break;
    case TokenTest::Kind::Capitalized: r = utf8::starts_upper(tok.token.surface); break;
    case TokenTest::Kind::Genitive: r = genitive_candidate(tok, ctx); break;
  }
  return r != t.negated;
}

bool atom_matches(const PatternAtom& a, const AnnotatedToken& tok, const SyntaxContext& ctx) {
  if (!a.literals.empty()) {
    std::string f = fold(tok.token.surface);
    if (std::find(a.literals.begin(), a.literals.end(), f) != a.literals.end()) return true;
  }
  for (const auto& set : a.test_sets)
    if (std::all_of(set.begin(), set.end(),
                    [&](const TokenTest& t) { return test_passes(t, tok, ctx); }))
      return true;
  return false;
}

struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Matcher {
 public:
  Matcher(const SyntaxRule& rule, const std::vector<AnnotatedToken>& stream,
          const SyntaxContext& ctx)
      : rule_(rule), stream_(stream), ctx_(ctx), ranges_(rule.pattern.size()) {}

  bool at(std::size_t start) { return step(0, start, start); }
  const std::vector<Range>& ranges() const { return ranges_; }

 private:
  bool step(std::size_t item, std::size_t pos, std::size_t start) {
    if (item == rule_.pattern.size()) return true;
    const PatternItem& it = rule_.pattern[item];
    if (it.negative) {
      std::optional<std::size_t> probe;
      if (item == 0) {
        if (start > 0) probe = start - 1;
      } else if (pos < stream_.size()) {
        probe = pos;
      }
      if (probe && atom_matches(it.atom, stream_[*probe], ctx_)) return false;
      ranges_[item] = {pos, pos};
      return step(item + 1, pos, start);
    }
    std::size_t n = 0;
    while (n < static_cast<std::size_t>(it.max) && pos + n < stream_.size() &&
           atom_matches(it.atom, stream_[pos + n], ctx_))
      ++n;
    for (std::size_t k = n + 1; k-- > static_cast<std::size_t>(it.min);) {
      ranges_[item] = {pos, pos + k};
      if (step(item + 1, pos + k, start)) return true;
    }
    return false;
  }

  const SyntaxRule& rule_;
  const std::vector<AnnotatedToken>& stream_;
  const SyntaxContext& ctx_;
  std::vector<Range> ranges_;
};

// ---------------------------------------------------------------------------
// Template functions

struct Eval {
  const SyntaxRule& rule;
  const std::vector<AnnotatedToken>& stream;
  const SyntaxContext& ctx;
  std::map<std::string, Range> captures;
  RewriteEdit& edit;

  std::optional<Range> capture(const std::string& arg) const {
    if (arg.empty() || arg[0] != '$') return std::nullopt;
    auto it = captures.find(arg.substr(1));
    if (it == captures.end()) return std::nullopt;
    return it->second;
  }

  std::string text(const Range& r) const { return render_tokens(stream, r.begin, r.end); }

  const AnnotatedToken* first(const std::string& arg) const {
    auto r = capture(arg);
    if (!r || r->begin == r->end) return nullptr;
    return &stream[r->begin];
  }

  static std::string restore_case(std::string_view like, std::string s) {
    return utf8::starts_upper(like) ? utf8::upper_first(s) : s;
  }

  const Reading* reading(const AnnotatedToken& t, auto pred) const {
    for (const auto& r : t.readings)
      if (pred(r)) return &r;
    return nullptr;
  }

  static bool lexical_verb(const Reading& r) {
    return r.features.pos() == Pos::V && !r.features.has("AUX");
  }

  std::optional<std::string> call(const TemplatePart& p) {
    const std::string& fn = p.text;
    auto arg = [&](std::size_t i) -> std::string { return i < p.args.size() ? p.args[i] : ""; };

    if (fn == "join") {
      auto a = capture(arg(0));
      auto b = capture(arg(1));
      if (!a || !b) return std::nullopt;
      std::string joined = text(*a) + utf8::lower(text(*b));
      auto hits = ctx.lexicon.lookup(joined);
      if (!hits.empty()) {
        for (const auto& h : hits)
          edit.readings.push_back({h.entry.lemma, h.entry.features, h.provenance, {}, joined});
        return joined;
      }
      auto cands = top_candidates(ctx.morph.apply_paradigms(joined, ctx.lexicon));
      if (cands.empty()) {
        edit.note = "concatenation '" + joined + "' unknown";
        return std::nullopt;
      }
      for (const auto& c : cands)
        edit.readings.push_back({c.lemma, c.features, "morph", c.trace, c.modern_form});
      return restore_case(joined, cands.front().modern_form);
    }
    if (fn == "genitive" || fn == "gen_s") {
      auto a = capture(arg(0));
      if (!a) return std::nullopt;
      std::string s = text(*a);
      if (fn == "genitive" && ends_with(s, "s")) s.pop_back();
      return s + "'s";
    }
    if (fn == "plural_en") {
      auto a = capture(arg(0));
      if (!a) return std::nullopt;
      std::string base = text(*a);
      auto plural = ctx.lexicon.inflect(utf8::lower(base), Pos::N, {{"Nb", "p"}});
      std::string out = plural ? restore_case(base, *plural) : base + "s";
      FeatureSet f(Pos::N);
      f.set("Nb", "p");
      edit.readings.push_back({base, f, rule.id, {}, out});
      return out;
    }
    if (fn == "participle") {
      const AnnotatedToken* t = first(arg(0));
      if (!t) return std::nullopt;
      auto cands = ctx.morph.participle_candidates(t->token.surface, ctx.lexicon);
      if (cands.empty()) {
        edit.note = "unknown participle";
        return std::nullopt;
      }
      for (const auto& c : cands)
        edit.readings.push_back({c.lemma, c.features, "morph", c.trace, c.modern_form});
      return restore_case(t->token.surface, cands.front().modern_form);
    }
    if (fn == "inflect") {
      const AnnotatedToken* v = first(arg(0));
      if (!v) return std::nullopt;
      const Reading* inf = reading(*v, [](const Reading& r) {
        return lexical_verb(r) && r.features.has_value("Tense", "INF");
      });
      if (!inf) return std::nullopt;
      std::vector<Trait> want;
      std::string mode = arg(1);
      if (const AnnotatedToken* aux = first(mode)) mode = fold(aux->token.surface);
      if (mode == "doth" || mode == "does" || mode == "PR3")
        want = {{"Tense", "PR"}, {"Pers", "3"}, {"Nb", "s"}};
      else if (mode == "do" || mode == "doe" || mode == "PR")
        want = {{"Tense", "PR"}};
      else if (mode == "did" || mode == "PT")
        want = {{"Tense", "PT"}};
      else
        return std::nullopt;
      auto form = ctx.lexicon.inflect(inf->lemma, Pos::V, want);
      if (!form) {
        edit.note = "no inflected form of '" + inf->lemma + "'";
        return std::nullopt;
      }
      FeatureSet f(Pos::V);
      for (const auto& w : want) f.set(w.key, w.value);
      edit.readings.push_back({inf->lemma, f, rule.id, {}, *form});
      return *form;
    }
    if (fn == "be_agree") {
      auto r = capture(arg(0));
      if (!r || r->begin == r->end) return std::nullopt;
      const AnnotatedToken& head = stream[r->end - 1];
      std::string h = fold(head.token.surface);
      if (h == "i") return "am";
      static const std::set<std::string> kSing{"it", "he", "she", "this", "that", "one"};
      static const std::set<std::string> kPlur{"they", "we", "you", "ye", "these", "those", "thou"};
      if (kSing.count(h)) return "is";
      if (kPlur.count(h)) return h == "thou" ? "art" : "are";
      bool sing = false, plur = false;
      for (const auto& rd : head.readings) {
        Pos p = rd.features.pos();
        if (p != Pos::N && p != Pos::PRO) continue;
        if (rd.features.has_value("Nb", "s")) sing = true;
        if (rd.features.has_value("Nb", "p")) plur = true;
      }
      if (sing == plur) {
        edit.note = "subject number undecidable";
        return std::nullopt;
      }
      return sing ? "is" : "are";
    }
    if (fn == "do_support" || fn == "base") {
      const AnnotatedToken* v = first(arg(0));
      if (!v) return std::nullopt;
      const Reading* fin = reading(*v, [](const Reading& r) {
        return lexical_verb(r) &&
               (r.features.has_value("Tense", "PR") || r.features.has_value("Tense", "PT"));
      });
      if (!fin) return std::nullopt;
      if (fn == "base") return fin->lemma;
      if (fin->features.has_value("Tense", "PT")) return "did";
      if (fin->features.has_value("Pers", "3") && fin->features.has_value("Nb", "s")) return "does";
      return "do";
    }
    return std::nullopt;
  }

  std::optional<std::vector<std::string>> run() {
    std::vector<std::string> parts;
    for (const auto& p : rule.rewrite) {
      switch (p.kind) {
        case TemplatePart::Kind::Literal: parts.push_back(p.text); break;
        case TemplatePart::Kind::Capture: {
          auto r = captures.find(p.text);
          if (r != captures.end() && r->second.begin < r->second.end) parts.push_back(text(r->second));
          break;
        }
        case TemplatePart::Kind::Call: {
          auto v = call(p);
          if (!v) return std::nullopt;
          if (!v->empty()) parts.push_back(std::move(*v));
          break;
        }
      }
    }
    return parts;
  }
};

bool contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i)))
      return true;
  return false;
}

std::string join_parts(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

}  // namespace

SyntaxEngine::SyntaxEngine(std::vector<SyntaxRule> rules) : rules_(std::move(rules)) {}

const SyntaxRule* SyntaxEngine::find(std::string_view id) const {
  for (const auto& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<RewriteEdit> SyntaxEngine::match_rule(const SyntaxRule& rule,
                                                  const std::vector<AnnotatedToken>& stream,
                                                  const SyntaxContext& ctx) const {
  std::vector<RewriteEdit> out;
  for (std::size_t start = 0; start < stream.size(); ++start) {
    Matcher m(rule, stream, ctx);
    if (!m.at(start)) continue;
    const auto& ranges = m.ranges();

    std::size_t first = stream.size(), last = 0, all_begin = stream.size(), all_end = 0;
    std::map<std::string, Range> captures;
    for (std::size_t i = 0; i < rule.pattern.size(); ++i) {
      const PatternItem& it = rule.pattern[i];
      const Range& r = ranges[i];
      if (!it.label.empty()) captures[it.label] = {r.begin, r.end};
      if (it.negative || r.begin == r.end) continue;
      all_begin = std::min(all_begin, r.begin);
      all_end = std::max(all_end, r.end);
      if (it.context) continue;
      first = std::min(first, r.begin);
      last = std::max(last, r.end);
    }
    if (first >= last) continue;

    std::vector<std::string> words;
    for (std::size_t i = all_begin; i < all_end; ++i) words.push_back(fold(stream[i].token.surface));
    if (std::any_of(rule.exceptions.begin(), rule.exceptions.end(),
                    [&](const auto& e) { return contains_sequence(words, e); }))
      continue;

    RewriteEdit edit;
    edit.begin = first;
    edit.end = last;
    edit.rule_id = rule.id;
    edit.priority = rule.priority;
    edit.annotate = rule.annotate;
    Eval ev{rule, stream, ctx, captures, edit};
    auto parts = ev.run();
    if (rule.when && !ctx.flags.count(*rule.when)) {
      edit.rewrite = false;
      edit.note = "rewrite disabled (" + *rule.when + " off)";
    } else if (!parts) {
      edit.rewrite = false;
      if (edit.note.empty()) edit.note = "rewrite not applicable";
    } else {
      if (!parts->empty() && utf8::starts_upper(stream[first].token.surface))
        (*parts)[0] = utf8::upper_first((*parts)[0]);
      edit.replacement = std::move(*parts);
      if (join_parts(edit.replacement) == render_tokens(stream, first, last)) edit.rewrite = false;
    }
    out.push_back(std::move(edit));
  }
  return out;
}

std::vector<RewriteEdit> SyntaxEngine::match_all(const std::vector<AnnotatedToken>& stream,
                                                 const SyntaxContext& ctx) const {
  std::vector<RewriteEdit> all;
  for (const auto& rule : rules_)
    for (auto& e : match_rule(rule, stream, ctx)) all.push_back(std::move(e));
  std::stable_sort(all.begin(), all.end(), [](const RewriteEdit& a, const RewriteEdit& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end - a.begin > b.end - b.begin;
  });
  std::vector<bool> used(stream.size(), false);
  std::vector<RewriteEdit> chosen;
  for (auto& e : all) {
    if (std::any_of(used.begin() + static_cast<std::ptrdiff_t>(e.begin),
                    used.begin() + static_cast<std::ptrdiff_t>(e.end), [](bool u) { return u; }))
      continue;
    std::fill(used.begin() + static_cast<std::ptrdiff_t>(e.begin),
              used.begin() + static_cast<std::ptrdiff_t>(e.end), true);
    chosen.push_back(std::move(e));
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const RewriteEdit& a, const RewriteEdit& b) { return a.begin < b.begin; });
  return chosen;
}

}  // namespace emodeng
