#include "emodeng/morph_engine.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "emodeng/error.hpp"
#include "emodeng/utf8.hpp"

namespace emodeng {

std::vector<MorphRule> parse_morph_rules(std::string_view text, const std::string& source) {
  std::vector<MorphRule> rules;
  std::set<std::string> ids;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4) throw ParseError("expected 4 tab-separated fields", line_no, 1, source);
    MorphRule r{cols[0], cols[1], cols[2], Anchor::Anywhere};
    if (r.id.empty()) throw ParseError("empty rule id", line_no, 1, source);
    if (!ids.insert(r.id).second) throw ParseError("duplicate rule id '" + r.id + "'", line_no, 1, source);
    if (r.from.empty()) throw ParseError("empty 'from' string", line_no, 1, source);
    if (r.from == r.to) throw ParseError("rule does not change its input", line_no, 1, source);
    if (cols[3] == "anywhere")
      r.anchor = Anchor::Anywhere;
    else if (cols[3] == "prefix")
      r.anchor = Anchor::Prefix;
    else if (cols[3] == "suffix")
      r.anchor = Anchor::Suffix;
    else
      throw ParseError("unknown anchor '" + cols[3] + "'", line_no, 1, source);
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<MorphRule> load_morph_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open morph rules " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_morph_rules(buf.str(), path.string());
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_lexical_verb(const LexEntry& e) {
  return e.features.pos() == Pos::V && !e.features.has("AUX");
}

CandidateAnalysis make(std::string_view source, const std::string& form, const LexEntry& e,
                       const std::vector<std::string>& trace) {
  CandidateAnalysis c;
  c.source_surface = std::string(source);
  c.modern_form = form;
  c.lemma = e.lemma;
  c.features = e.features;
  c.features.erase("FLX");
  c.trace = trace;
  c.rank = static_cast<int>(trace.size());
  return c;
}

// Every modern reading of `form`; a gerund also reads as a singular noun.
void validate(std::string_view source, const std::string& form,
              const std::vector<std::string>& trace, const Lexicon& lex,
              std::vector<CandidateAnalysis>& out) {
  for (const auto& a : lex.lookup_in(kTierModern, form)) {
    const LexEntry& e = a.entry;
    if (e.features.pos() == Pos::V && e.features.has_value("Tense", "G")) {
      CandidateAnalysis n = make(source, form, e, trace);
      n.features = FeatureSet(Pos::N);
      n.features.set("Nb", "s");
      out.push_back(std::move(n));
    }
    out.push_back(make(source, form, e, trace));
  }
}

// Verb lemmas among `stems`, in order.
std::vector<const LexEntry*> verb_lemmas(const std::vector<std::string>& stems, const Lexicon& lex) {
  std::vector<const LexEntry*> out;
  const Tier* modern = lex.tier(kTierModern);
  if (!modern) return out;
  for (const auto& s : stems) {
    for (const LexEntry* e : modern->find(s)) {
      if (is_lexical_verb(*e) && e->features.has_value("Tense", "INF") && e->surface == e->lemma) {
        out.push_back(e);
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> stems_for(std::string_view stem) {
  std::vector<std::string> stems;
  auto add = [&](std::string s) {
    if (s.size() >= 2 && std::find(stems.begin(), stems.end(), s) == stems.end())
      stems.push_back(std::move(s));
  };
  std::string s(stem);
  add(s);
  add(s + "e");
  if (!s.empty() && s.back() == 'i') add(s.substr(0, s.size() - 1) + "y");
  return stems;
}

// Readings of an -ed form in the order participle, preterit, adjective.
std::vector<const LexEntry*> ed_readings(const std::string& form, const Lexicon& lex,
                                         bool with_adjective) {
  std::vector<const LexEntry*> out;
  const Tier* modern = lex.tier(kTierModern);
  if (!modern) return out;
  auto hits = modern->find(form);
  for (const char* tense : {"PP", "PT"})
    for (const LexEntry* e : hits)
      if (is_lexical_verb(*e) && e->features.has_value("Tense", tense)) out.push_back(e);
  if (with_adjective && !out.empty())
    for (const LexEntry* e : hits)
      if (e->features.pos() == Pos::A) out.push_back(e);
  return out;
}

// Flexion analysis of `form`, appended to `trace`.
std::vector<CandidateAnalysis> flexion(std::string_view source, const std::string& form,
                                       const std::vector<std::string>& trace, const Lexicon& lex) {
  std::vector<CandidateAnalysis> out;
  auto extend = [&](std::string_view op) {
    auto t = trace;
    t.emplace_back(op);
    return t;
  };

  if (ends_with(form, "th") && form.size() > 3) {
    std::vector<std::string> stems;
    if (ends_with(form, "eth"))
      for (auto& s : stems_for(form.substr(0, form.size() - 3))) stems.push_back(s);
    for (auto& s : stems_for(form.substr(0, form.size() - 2)))
      if (std::find(stems.begin(), stems.end(), s) == stems.end()) stems.push_back(s);
    for (const LexEntry* v : verb_lemmas(stems, lex)) {
      std::vector<Trait> want{{"Tense", "PR"}, {"Pers", "3"}, {"Nb", "s"}};
      auto modern = lex.inflect(v->lemma, Pos::V, want);
      if (!modern) continue;
      LexEntry e = *v;
      e.features = FeatureSet(Pos::V);
      for (auto& w : want) e.features.set(w.key, w.value);
      out.push_back(make(source, *modern, e, extend(kOpFlexEth)));
    }
    if (!out.empty()) return out;
  }

  if (ends_with(form, "st") && form.size() > 3) {
    std::vector<std::string> stems;
    if (ends_with(form, "est"))
      for (auto& s : stems_for(form.substr(0, form.size() - 3))) stems.push_back(s);
    for (auto& s : stems_for(form.substr(0, form.size() - 2)))
      if (std::find(stems.begin(), stems.end(), s) == stems.end()) stems.push_back(s);
    for (const LexEntry* v : verb_lemmas(stems, lex)) {
      LexEntry e = *v;
      e.features = FeatureSet(Pos::V);
      e.features.set("Tense", "PR");
      e.features.set("Pers", "2");
      e.features.set("Nb", "s");
      out.push_back(make(source, v->lemma, e, extend(kOpFlexEst)));
    }
    if (!out.empty()) return out;
  }

  if (ends_with(form, "t") && form.size() > 2) {
    std::string stem = form.substr(0, form.size() - 1);
    char last = stem.back();
    if (last == 'p' || last == 'k' || last == 'x' || last == 's' || ends_with(stem, "sh")) {
      std::vector<std::string> ed_forms{stem + "ed"};
      if (last == 's' && !ends_with(stem, "ss")) ed_forms.push_back(stem + "sed");
      if (last == 'p' || last == 'k') ed_forms.push_back(stem + last + "ed");
      for (const auto& f : ed_forms) {
        for (const LexEntry* e : ed_readings(f, lex, false)) {
          if (!e->features.has_value("Tense", "PT")) {
            out.push_back(make(source, f, *e, extend(kOpFlexT)));
            continue;
          }
          // The shortened preterit is listed once per person and number.
          for (const char* pers : {"1", "2", "3"})
            for (const char* nb : {"s", "p"}) {
              LexEntry pt = *e;
              pt.features.set("Pers", pers);
              pt.features.set("Nb", nb);
              out.push_back(make(source, f, pt, extend(kOpFlexT)));
            }
        }
        if (!out.empty()) break;
      }
    }
  }
  return out;
}

std::vector<CandidateAnalysis> ranked(std::vector<CandidateAnalysis> all,
                                      const std::vector<MorphRule>& rules) {
  auto step_index = [&](const std::string& id) -> std::size_t {
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (rules[i].id == id) return i;
    static const std::string_view kBuiltins[] = {kOpCollapseDouble, kOpAppendE, kOpFlexEth,
                                                 kOpFlexEst, kOpFlexT};
    for (std::size_t i = 0; i < std::size(kBuiltins); ++i)
      if (kBuiltins[i] == id) return rules.size() + i;
    return rules.size() + std::size(kBuiltins);
  };
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> keys;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::vector<std::size_t> k;
    for (const auto& id : all[i].trace) k.push_back(step_index(id));
    keys.emplace_back(std::move(k), i);
  }
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<CandidateAnalysis> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& [k, i] : keys) {
    auto key = std::make_tuple(all[i].modern_form, all[i].lemma, all[i].features.serialize());
    if (seen.insert(key).second) out.push_back(std::move(all[i]));
  }
  return out;
}

}  // namespace

MorphEngine::MorphEngine(std::vector<MorphRule> rules, int max_depth)
    : rules_(std::move(rules)), max_depth_(max_depth) {
  if (max_depth_ < 1) throw ConfigError("max_depth must be at least 1");
}

std::vector<MorphEngine::Node> MorphEngine::successors(const Node& node) const {
  std::vector<Node> out;
  const std::string& s = node.form;
  auto push = [&](std::string form, std::string_view id) {
    if (form.empty() || form == s) return;
    Node n{std::move(form), node.trace};
    n.trace.emplace_back(id);
    out.push_back(std::move(n));
  };
  for (const auto& r : rules_) {
    switch (r.anchor) {
      case Anchor::Prefix:
        if (s.rfind(r.from, 0) == 0) push(r.to + s.substr(r.from.size()), r.id);
        break;
      case Anchor::Suffix:
        if (ends_with(s, r.from)) push(s.substr(0, s.size() - r.from.size()) + r.to, r.id);
        break;
      case Anchor::Anywhere:
        for (std::size_t p = s.find(r.from); p != std::string::npos; p = s.find(r.from, p + 1))
          push(s.substr(0, p) + r.to + s.substr(p + r.from.size()), r.id);
        break;
    }
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] == s[i + 1] && std::isalpha(static_cast<unsigned char>(s[i])))
      push(s.substr(0, i) + s.substr(i + 1), kOpCollapseDouble);
  if (!ends_with(s, "e")) push(s + "e", kOpAppendE);
  return out;
}

std::vector<CandidateAnalysis> MorphEngine::apply_paradigms(std::string_view token,
                                                            const Lexicon& lex) const {
  std::string start = utf8::lower(token);
  std::vector<CandidateAnalysis> all;
  std::vector<Node> level{{start, {}}};
  std::unordered_set<std::string> seen{start};
  for (int depth = 0; depth < max_depth_; ++depth) {
    std::vector<Node> next;
    for (const Node& node : level) {
      for (auto& c : flexion(token, node.form, node.trace, lex)) all.push_back(std::move(c));
      for (Node& child : successors(node)) {
        if (!seen.insert(child.form).second) continue;
        validate(token, child.form, child.trace, lex, all);
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  auto out = ranked(std::move(all), rules_);
  if (utf8::starts_upper(token))
    for (auto& c : out) c.modern_form = utf8::upper_first(c.modern_form);
  return out;
}

std::vector<CandidateAnalysis> MorphEngine::verb_flexion_candidates(std::string_view token,
                                                                    const Lexicon& lex) const {
  return flexion(token, utf8::lower(token), {}, lex);
}

std::vector<CandidateAnalysis> MorphEngine::doubled_letter_candidates(std::string_view token,
                                                                      const Lexicon& lex) const {
  std::string s = utf8::lower(token);
  std::vector<CandidateAnalysis> all;
  std::vector<std::pair<std::string, std::string_view>> forms;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] == s[i + 1]) forms.emplace_back(s.substr(0, i) + s.substr(i + 1), kOpCollapseDouble);
  if (ends_with(s, "e") && s.size() > 2) forms.emplace_back(s.substr(0, s.size() - 1), "drop_final_e");
  if (!ends_with(s, "e")) forms.emplace_back(s + "e", kOpAppendE);
  for (const auto& [f, op] : forms) validate(token, f, {std::string(op)}, lex, all);
  return ranked(std::move(all), rules_);
}

std::vector<CandidateAnalysis> MorphEngine::participle_candidates(std::string_view stem,
                                                                  const Lexicon& lex) const {
  auto attempt = [&](const std::string& s, const std::vector<std::string>& trace) {
    std::vector<CandidateAnalysis> out;
    std::vector<std::string> forms{s + "ed"};
    if (ends_with(s, "e")) forms.push_back(s + "d");
    forms.push_back(s + "sed");
    if (ends_with(s, "y")) forms.push_back(s.substr(0, s.size() - 1) + "ied");
    auto t = trace;
    t.emplace_back("participle");
    for (const auto& f : forms) {
      for (const LexEntry* e : ed_readings(f, lex, true)) out.push_back(make(stem, f, *e, t));
      if (!out.empty()) break;
    }
    return out;
  };

  std::string start = utf8::lower(stem);
  if (auto direct = attempt(start, {}); !direct.empty()) return direct;
  std::vector<Node> level{{start, {}}};
  std::unordered_set<std::string> seen{start};
  for (int depth = 1; depth < max_depth_; ++depth) {
    std::vector<CandidateAnalysis> all;
    std::vector<Node> next;
    for (const Node& node : level) {
      for (Node& child : successors(node)) {
        if (!seen.insert(child.form).second) continue;
        for (auto& c : attempt(child.form, child.trace)) all.push_back(std::move(c));
        next.push_back(std::move(child));
      }
    }
    if (!all.empty()) return ranked(std::move(all), rules_);
    level = std::move(next);
  }
  return {};
}

std::vector<CandidateAnalysis> top_candidates(const std::vector<CandidateAnalysis>& analyses) {
  std::vector<CandidateAnalysis> out;
  if (analyses.empty()) return out;
  const std::string& best = analyses.front().modern_form;
  for (const auto& a : analyses)
    if (a.modern_form == best) out.push_back(a);
  return out;
}

std::vector<CandidateEntry> propose_entries(const std::vector<CandidateAnalysis>& analyses) {
  std::vector<CandidateEntry> out;
  for (const auto& a : analyses) {
    CandidateEntry c;
    c.entry.surface = a.source_surface;
    c.entry.lemma = a.lemma;
    c.entry.features = a.features;
    c.entry.features.erase("EN");
    c.entry.features.erase("XVII");
    c.entry.features.set("EN", a.lemma);
    c.entry.features.set("XVII");
    c.entry.tier = std::string(kTierUser);
    c.id = candidate_id(c.entry);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace emodeng
