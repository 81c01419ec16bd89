#include "emodeng/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "emodeng/error.hpp"
#include "emodeng/typography.hpp"
#include "emodeng/utf8.hpp"

namespace emodeng {

std::string_view to_string(UnknownCategory c) {
  switch (c) {
    case UnknownCategory::Foreign: return "foreign";
    case UnknownCategory::ProperNoun: return "proper-noun";
    case UnknownCategory::Abbreviation: return "abbreviation";
    case UnknownCategory::Xvii: return "xvii";
  }
  return "xvii";
}

namespace {

nlohmann::json reading_json(const Reading& r) {
  nlohmann::json j{{"lemma", r.lemma},
                   {"features", r.features.serialize()},
                   {"provenance", r.provenance},
                   {"modern_form", r.modern_form}};
  if (!r.trace.empty()) j["trace"] = r.trace;
  return j;
}

nlohmann::json traits_json(const std::vector<Trait>& traits) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& t : traits) j[t.key] = t.value ? nlohmann::json(*t.value) : nlohmann::json(true);
  return j;
}

bool is_word(const Token& t) { return t.kind == TokenKind::Word; }

bool has_letter(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); i += utf8::sequence_length(s, i))
    if (utf8::is_letter(utf8::decode(s, i))) return true;
  return false;
}

bool sentence_end(const Token& t) {
  return t.kind == TokenKind::Punct && (t.surface == "." || t.surface == "!" || t.surface == "?");
}

// Up to `n` tokens on one side of [begin, end), as original text.
std::string window(std::string_view original, const std::vector<AnnotatedToken>& stream,
                   std::size_t begin, std::size_t end, bool left, std::size_t n) {
  if (left) {
    if (begin == 0) return {};
    std::size_t from = begin >= n ? begin - n : 0;
    return std::string(original.substr(stream[from].token.span.begin,
                                       stream[begin].token.span.begin - stream[from].token.span.begin));
  }
  if (end >= stream.size()) return {};
  std::size_t to = std::min(stream.size(), end + n) - 1;
  std::size_t b = stream[end - 1].token.span.end;
  return std::string(original.substr(b, stream[to].token.span.end - b));
}

std::string trim_space(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

nlohmann::json to_json(const Annotation& a, const std::string& doc) {
  nlohmann::json j{{"doc", doc},
                   {"layer", a.layer == Annotation::Layer::Lexical ? "lexical" : "syntax"},
                   {"tokens", {a.token_begin, a.token_end}},
                   {"span", {a.span.begin, a.span.end}},
                   {"text", a.text}};
  nlohmann::json analyses = nlohmann::json::array();
  for (const auto& r : a.analyses) analyses.push_back(reading_json(r));
  j["analyses"] = std::move(analyses);
  if (a.transcription) j["transcription"] = *a.transcription;
  if (!a.provenance.empty()) j["provenance"] = a.provenance;
  if (!a.traits.empty()) j["traits"] = traits_json(a.traits);
  if (!a.note.empty()) j["note"] = a.note;
  return j;
}

// ---------------------------------------------------------------------------
// Report

std::size_t Report::unknown_occurrences() const {
  std::size_t n = 0;
  for (const auto& [w, u] : unknown) n += u.occurrences;
  return n;
}

std::map<UnknownCategory, std::size_t> Report::category_counts() const {
  std::map<UnknownCategory, std::size_t> out{{UnknownCategory::Foreign, 0},
                                             {UnknownCategory::ProperNoun, 0},
                                             {UnknownCategory::Abbreviation, 0},
                                             {UnknownCategory::Xvii, 0}};
  for (const auto& [w, u] : unknown) ++out[u.category];
  return out;
}

std::map<UnknownCategory, double> Report::category_percentages() const {
  std::map<UnknownCategory, double> out;
  if (unknown.empty()) return out;
  for (const auto& [c, n] : category_counts())
    out[c] = 100.0 * static_cast<double>(n) / static_cast<double>(unknown.size());
  return out;
}

void Report::merge(const Report& other) {
  documents.insert(documents.end(), other.documents.begin(), other.documents.end());
  corpus_size += other.corpus_size;
  for (const auto& [w, n] : other.words) words[w] += n;
  for (const auto& [w, u] : other.unknown) {
    auto [it, inserted] = unknown.emplace(w, u);
    if (inserted) continue;
    it->second.occurrences += u.occurrences;
    it->second.category = std::min(it->second.category, u.category);
  }
}

nlohmann::json Report::to_json() const {
  auto pct = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b);
  };
  nlohmann::json categories = nlohmann::json::object();
  auto counts = category_counts();
  auto percents = category_percentages();
  for (const auto& [c, n] : counts)
    categories[std::string(to_string(c))] = {{"count", n}, {"percent", percents.empty() ? 0.0 : percents[c]}};
  nlohmann::json words_json = nlohmann::json::object();
  for (const auto& [w, u] : unknown)
    words_json[w] = {{"occurrences", u.occurrences}, {"category", to_string(u.category)}};
  return {{"documents", documents},
          {"corpus_size", corpus_size},
          {"distinct_words", distinct_words()},
          {"unknown_distinct", unknown_distinct()},
          {"unknown_occurrences", unknown_occurrences()},
          {"unknown_percent_of_distinct", pct(unknown_distinct(), distinct_words())},
          {"unknown_percent_of_corpus", pct(unknown_occurrences(), corpus_size)},
          {"categories", categories},
          {"unknown_words", words_json}};
}

Report report_stats(const std::vector<Report>& documents) {
  Report total;
  for (const auto& d : documents) total.merge(d);
  return total;
}

UnknownCategory classify_unknown(const Token& token, const Lexicon& lex, bool sentence_initial) {
  if (token.kind == TokenKind::Foreign || !lex.lookup_in(kTierForeign, token.surface).empty())
    return UnknownCategory::Foreign;
  if (!lex.lookup_in(kTierNamedEntities, token.surface).empty() ||
      (utf8::starts_upper(token.surface) && !sentence_initial))
    return UnknownCategory::ProperNoun;
  if (token.surface.size() > 1 && token.surface.back() == '.') return UnknownCategory::Abbreviation;
  return UnknownCategory::Xvii;
}

Report document_report(const std::vector<Token>& tokens, const Lexicon& lex,
                       const std::string& doc) {
  Report r;
  r.documents.push_back(doc);
  auto known = [&](std::string_view w) {
    return !lex.lookup_in(kTierModern, w).empty() || !lex.lookup_in(kTierUser, w).empty();
  };
  auto count = [&](const Token& t, const std::string& word, bool initial) {
    ++r.corpus_size;
    std::string key = utf8::lower(word);
    ++r.words[key];
    if (known(word)) return;
    Token probe = t;
    probe.surface = word;
    UnknownWord& u = r.unknown[key];
    UnknownCategory c = classify_unknown(probe, lex, initial);
    u.category = u.occurrences == 0 ? c : std::min(u.category, c);
    ++u.occurrences;
  };
  bool initial = true;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Word) {
      count(t, t.surface, initial);
      initial = false;
    } else if (t.kind == TokenKind::Foreign) {
      for (const auto& w : foreign_words(t)) count(t, w, false);
      initial = false;
    } else if (sentence_end(t)) {
      initial = true;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline

std::vector<std::string> load_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open abbreviations " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim_space(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(utf8::lower(line));
  }
  return out;
}

namespace {

Lexicon load_lexicon(const PipelineConfig& config) {
  auto paradigms = std::make_shared<const ParadigmTable>(ParadigmTable::load(config.paradigms));
  std::vector<TierSource> tiers = config.tiers;
  // The user dictionary is created by the first accepted candidate.
  for (auto& t : tiers)
    if (t.name == kTierUser)
      std::erase_if(t.files, [](const auto& f) { return !std::filesystem::exists(f); });
  return Lexicon::load(tiers, paradigms);
}

}  // namespace

Pipeline::Pipeline(const PipelineConfig& config) : Pipeline(config, [&] {
  check_files(config);
  return load_lexicon(config);
}()) {}

Pipeline::Pipeline(const PipelineConfig& config, Lexicon lexicon)
    : config_(config), lexicon_(std::make_shared<const Lexicon>(std::move(lexicon))) {
  check_files(config_);
  morph_ = std::make_shared<const MorphEngine>(load_morph_rules(config_.morph_rules), config_.max_depth);
  syntax_ = std::make_shared<const SyntaxEngine>(load_syntax_rules(config_.syntax_rules));
  if (!config_.abbreviations.empty()) {
    tokenizer_.abbreviations.clear();
    for (auto& a : load_abbreviations(config_.abbreviations)) tokenizer_.abbreviations.insert(a);
  }
  auto note = [&](const std::filesystem::path& p) {
    if (std::filesystem::exists(p)) versions_[p.filename().string()] = read_version_header(p);
  };
  for (const auto& t : config_.tiers)
    for (const auto& f : t.files) note(f);
  note(config_.paradigms);
  note(config_.morph_rules);
  note(config_.syntax_rules);
  if (!config_.abbreviations.empty()) note(config_.abbreviations);
}

Pipeline Pipeline::with_lexicon(Lexicon lexicon) const {
  Pipeline p = *this;
  p.lexicon_ = std::make_shared<const Lexicon>(std::move(lexicon));
  return p;
}

std::map<std::string, std::string> Pipeline::data_versions() const { return versions_; }

std::string dictionary_transcription(const Analysis& a, std::string_view surface,
                                     const Lexicon& lex) {
  const Tier* tier = lex.tier(a.provenance);
  auto en = a.entry.features.value("EN");
  if (!tier || !tier->options().transcribe || !en) return std::string(surface);
  std::string out = *en;
  std::vector<Trait> want;
  for (const char* key : {"Tense", "Pers", "Nb", "Deg"})
    if (auto v = a.entry.features.value(key)) want.push_back({key, *v});
  if (!want.empty()) {
    std::size_t space = out.rfind(' ');
    std::string head = space == std::string::npos ? std::string() : out.substr(0, space + 1);
    std::string last = space == std::string::npos ? out : out.substr(space + 1);
    if (auto f = lex.inflect(utf8::lower(last), a.entry.features.pos(), want))
      out = head + (utf8::starts_upper(last) ? utf8::upper_first(*f) : *f);
  }
  if (utf8::starts_upper(surface)) out = utf8::upper_first(out);
  return out;
}

std::vector<AnnotatedToken> Pipeline::annotate_tokens(const NormalizedText& norm) const {
  std::vector<Token> tokens = tokenize(norm.text, norm.offsets, tokenizer_);
  std::vector<AnnotatedToken> stream;
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    AnnotatedToken at;
    std::vector<Analysis> analyses;
    at.token = tokens[i];
    if (is_word(tokens[i])) {
      if (auto mw = lexicon_->match_multiword(tokens, i); mw && mw->length > 1) {
        const Token& last = tokens[i + mw->length - 1];
        at.token.surface = norm.text.substr(tokens[i].norm.begin, last.norm.end - tokens[i].norm.begin);
        at.token.span.end = last.span.end;
        at.token.norm.end = last.norm.end;
        analyses = std::move(mw->analyses);
        i += mw->length - 1;
      } else {
        analyses = lexicon_->lookup(tokens[i].surface);
      }
    }
    at.gap = norm.text.substr(prev_end, at.token.norm.begin - prev_end);
    prev_end = at.token.norm.end;
    at.transcription = at.token.surface;

    const std::string& surface = at.token.surface;
    if (!analyses.empty()) {
      at.known = true;
      at.tier = analyses.front().provenance;
      for (const auto& a : analyses)
        at.readings.push_back({a.entry.lemma, a.entry.features, a.provenance, {},
                               dictionary_transcription(a, surface, *lexicon_)});
      at.transcription = at.readings.front().modern_form;
      if (at.transcription != surface) at.provenance = at.tier;
    } else if (is_word(at.token) && has_letter(surface) &&
               utf8::sequence_length(surface, 0) < surface.size()) {
      for (auto& c : morph_->apply_paradigms(surface, *lexicon_)) {
        // A form the typography pass would change again is not a transcription.
        if (normalize_chars(c.modern_form, config_.typography).text != c.modern_form) continue;
        at.readings.push_back({c.lemma, c.features, "morph", c.trace, c.modern_form});
      }
      if (!at.readings.empty()) {
        at.transcription = at.readings.front().modern_form;
        if (at.transcription != surface) at.provenance = "morph";
      }
    }
    stream.push_back(std::move(at));
  }
  return stream;
}

std::vector<RewriteEdit> Pipeline::rewrite_edits(const std::vector<AnnotatedToken>& stream) const {
  SyntaxContext ctx{*lexicon_, *morph_, {}};
  if (config_.rewrite_negation) ctx.flags.insert("rewrite_negation");
  return syntax_->match_all(stream, ctx);
}

std::string assemble(const std::vector<AnnotatedToken>& stream,
                     const std::vector<RewriteEdit>& edits, std::string_view tail) {
  std::string out;
  auto e = edits.begin();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    while (e != edits.end() && (e->end <= i || !e->rewrite)) ++e;
    if (e != edits.end() && e->begin == i) {
      std::string replacement;
      for (const auto& part : e->replacement) {
        if (!replacement.empty()) replacement += ' ';
        replacement += part;
      }
      if (!replacement.empty()) out += stream[i].gap + replacement;
      i = e->end - 1;
      continue;
    }
    out += stream[i].gap;
    out += stream[i].transcription;
  }
  out += tail;
  return out;
}

TranscriptionResult Pipeline::transcribe(std::string_view text, const std::string& doc) const {
  if (!utf8::is_valid(text)) throw Error("input is not valid UTF-8");
  TranscriptionResult res;
  res.doc = doc;
  NormalizedText norm = normalize_chars(text, config_.typography);
  res.normalized = norm.text;
  res.tokens = annotate_tokens(norm);
  res.edits = rewrite_edits(res.tokens);
  std::size_t last = res.tokens.empty() ? 0 : res.tokens.back().token.norm.end;
  res.output = assemble(res.tokens, res.edits, std::string_view(norm.text).substr(last));
  res.report = document_report(tokenize(norm.text, norm.offsets, tokenizer_), *lexicon_, doc);

  for (std::size_t i = 0; i < res.tokens.size(); ++i) {
    const AnnotatedToken& t = res.tokens[i];
    if (t.token.kind != TokenKind::Word && t.token.kind != TokenKind::Foreign) continue;
    Annotation a;
    a.token_begin = i;
    a.token_end = i + 1;
    a.span = t.token.span;
    a.text = t.token.surface;
    a.analyses = t.readings;
    if (t.transcription != t.token.surface) {
      a.transcription = t.transcription;
      a.provenance = t.provenance;
    }
    if (!t.known && t.readings.empty() && t.token.kind == TokenKind::Word) a.note = "unknown";
    res.annotations.push_back(std::move(a));
  }
  for (const auto& e : res.edits) {
    Annotation a;
    a.layer = Annotation::Layer::Syntax;
    a.token_begin = e.begin;
    a.token_end = e.end;
    a.span = {res.tokens[e.begin].token.span.begin, res.tokens[e.end - 1].token.span.end};
    a.text = res.normalized.substr(res.tokens[e.begin].token.norm.begin,
                                   res.tokens[e.end - 1].token.norm.end - res.tokens[e.begin].token.norm.begin);
    a.analyses = e.readings;
    if (e.rewrite) {
      std::string r;
      for (const auto& p : e.replacement) r += (r.empty() ? "" : " ") + p;
      a.transcription = r;
    }
    a.provenance = e.rule_id;
    a.traits = e.annotate;
    a.note = e.note;
    res.annotations.push_back(std::move(a));
  }
  std::stable_sort(res.annotations.begin(), res.annotations.end(),
                   [](const Annotation& x, const Annotation& y) { return x.token_begin < y.token_begin; });

  // Proposals for words no tier knows.
  for (std::size_t i = 0; i < res.tokens.size(); ++i) {
    const AnnotatedToken& t = res.tokens[i];
    if (t.known || t.readings.empty()) continue;
    std::vector<CandidateAnalysis> top;
    for (const auto& r : t.readings) {
      if (r.modern_form != t.readings.front().modern_form) break;
      top.push_back({utf8::lower(t.token.surface), r.modern_form, r.lemma, r.features, r.trace, 0});
    }
    CandidateContext ctx{doc, t.token.span, trim_space(window(text, res.tokens, i, i + 1, true, 5)),
                         std::string(text.substr(t.token.span.begin, t.token.span.end - t.token.span.begin)),
                         trim_space(window(text, res.tokens, i, i + 1, false, 5))};
    for (auto& c : propose_entries(top)) {
      auto existing = std::find_if(res.candidates.begin(), res.candidates.end(),
                                   [&](const CandidateEntry& x) { return x.id == c.id; });
      if (existing != res.candidates.end()) {
        existing->contexts.push_back(ctx);
      } else {
        c.contexts.push_back(ctx);
        res.candidates.push_back(std::move(c));
      }
    }
  }
  return res;
}

}  // namespace emodeng
