#include "emodeng/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "emodeng/error.hpp"
#include "emodeng/utf8.hpp"

namespace emodeng {

namespace {

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on `sep` outside double quotes.  Columns are 1-based offsets of
// each piece in the original line.
std::vector<Field> split_unquoted(std::string_view s, char sep, std::size_t base_column,
                                  std::size_t line_no, const std::string& source) {
  std::vector<Field> out;
  bool quoted = false;
  std::size_t quote_col = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') {
      quoted = !quoted;
      quote_col = base_column + i;
    } else if (s[i] == sep && !quoted) {
      out.push_back({s.substr(start, i - start), base_column + start});
      start = i + 1;
    }
  }
  if (quoted) throw ParseError("unbalanced quote", line_no, quote_col, source);
  out.push_back({s.substr(start), base_column + start});
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

std::size_t leading_space(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && std::isspace(static_cast<unsigned char>(s[n]))) ++n;
  return n;
}

Trait parse_trait(const Field& f, std::size_t line_no, const std::string& source) {
  std::string_view t = trim(f.text);
  std::size_t col = f.column + leading_space(f.text);
  if (t.empty()) throw ParseError("empty trait", line_no, col, source);
  std::size_t eq = t.find('=');
  if (eq == std::string_view::npos) {
    if (t.find('"') != std::string_view::npos)
      throw ParseError("quote in trait key", line_no, col, source);
    return {std::string(t), std::nullopt};
  }
  std::string key(trim(t.substr(0, eq)));
  if (key.empty()) throw ParseError("empty trait key", line_no, col, source);
  return {key, unquote(t.substr(eq + 1))};
}

std::vector<Trait> parse_delta(std::string_view text, std::size_t base_column, std::size_t line_no,
                               const std::string& source) {
  std::vector<Trait> delta;
  if (trim(text).empty()) return delta;
  for (const auto& f : split_unquoted(text, '+', base_column, line_no, source))
    delta.push_back(parse_trait(f, line_no, source));
  return delta;
}

bool has_multiword_shape(std::string_view surface) {
  return std::any_of(surface.begin(), surface.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && !std::isalpha(u);
  });
}

}  // namespace

LexEntry parse_entry_line(std::string_view line, std::size_t line_no, const std::string& source) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  auto fields = split_unquoted(line, ',', 1, line_no, source);
  if (fields.size() < 2) throw ParseError("missing comma", line_no, line.size() + 1, source);
  if (fields.size() > 3) throw ParseError("too many fields", line_no, fields[3].column, source);

  LexEntry entry;
  entry.surface = unquote(fields[0].text);
  if (entry.surface.empty()) throw ParseError("empty surface", line_no, 1, source);
  if (entry.surface.find('\t') != std::string::npos)
    throw ParseError("tab in surface", line_no, 1, source);
  if (fields.size() == 3) {
    entry.lemma = unquote(fields[1].text);
    if (entry.lemma.empty()) throw ParseError("empty lemma", line_no, fields[1].column, source);
  } else {
    entry.lemma = entry.surface;
  }

  const Field& code = fields.back();
  auto parts = split_unquoted(code.text, '+', code.column, line_no, source);
  std::string_view pos_code = trim(parts[0].text);
  auto pos = parse_pos(pos_code);
  if (!pos)
    throw ParseError("unknown category code '" + std::string(pos_code) + "'", line_no,
                     parts[0].column + leading_space(parts[0].text), source);
  entry.features = FeatureSet(*pos);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    Trait t = parse_trait(parts[i], line_no, source);
    if (entry.features.has(t.key))
      throw ParseError("duplicate trait '" + t.key + "'", line_no, parts[i].column, source);
    if (t.key == "EN" && (!t.value || t.value->empty()))
      throw ParseError("empty EN value", line_no, parts[i].column, source);
    entry.features.set(std::move(t.key), std::move(t.value));
  }
  return entry;
}

std::string serialize_entry(const LexEntry& entry) {
  auto field = [](const std::string& s) {
    return s.find_first_of(",\"") == std::string::npos ? s : '"' + s + '"';
  };
  std::string out = field(entry.surface);
  if (entry.lemma != entry.surface) out += ',' + field(entry.lemma);
  out += ',';
  out += entry.features.serialize();
  return out;
}

std::vector<LexEntry> read_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dictionary " + path.string());
  std::vector<LexEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  const std::string source = path.string();
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    entries.push_back(parse_entry_line(line, line_no, source));
  }
  return entries;
}

std::string read_version_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  constexpr std::string_view kTag = "# version:";
  while (std::getline(in, line)) {
    if (line.rfind(kTag, 0) == 0) return std::string(trim(std::string_view(line).substr(kTag.size())));
    if (!line.empty() && line[0] != '#') break;
  }
  return {};
}

ParadigmTable ParadigmTable::parse(std::string_view text, const std::string& source) {
  ParadigmTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("missing ':'", line_no, 1, source);
    InflectionParadigm p;
    p.id = std::string(trim(line.substr(0, colon)));
    if (p.id.empty()) throw ParseError("empty paradigm id", line_no, 1, source);
    for (const auto& f : split_unquoted(line.substr(colon + 1), ';', colon + 2, line_no, source)) {
      std::string_view form = trim(f.text);
      std::size_t col = f.column + leading_space(f.text);
      if (form.size() < 2 || form.front() != '(' || form.back() != ')')
        throw ParseError("form must be parenthesized", line_no, col, source);
      std::string_view body = form.substr(1, form.size() - 2);
      std::size_t arrow = body.find("->");
      if (arrow == std::string_view::npos) throw ParseError("missing '->'", line_no, col, source);
      ParadigmForm pf;
      std::istringstream words{std::string(body.substr(0, arrow))};
      std::string word;
      while (words >> word) {
        EditOp op;
        if (word.size() > 1 && word[0] == 'B' &&
            std::all_of(word.begin() + 1, word.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          op.drop = std::stoul(word.substr(1));
        else
          op.append = word;
        pf.script.push_back(std::move(op));
      }
      pf.delta = parse_delta(body.substr(arrow + 2), col + 1 + arrow + 2, line_no, source);
      p.forms.push_back(std::move(pf));
    }
    if (table.find(p.id)) throw ParseError("duplicate paradigm '" + p.id + "'", line_no, 1, source);
    table.add(std::move(p));
  }
  return table;
}

ParadigmTable ParadigmTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open paradigm file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const InflectionParadigm* ParadigmTable::find(std::string_view id) const {
  auto it = paradigms_.find(std::string(id));
  return it == paradigms_.end() ? nullptr : &it->second;
}

void ParadigmTable::add(InflectionParadigm paradigm) {
  std::string id = paradigm.id;
  paradigms_[id] = std::move(paradigm);
}

std::string apply_script(const std::vector<EditOp>& script, std::string_view form) {
  std::string out(form);
  for (const auto& op : script) {
    if (op.drop > out.size())
      throw InflectionError("edit script drops " + std::to_string(op.drop) + " from '" + out + "'");
    out.erase(out.size() - op.drop);
    out += op.append;
  }
  if (out.empty()) throw InflectionError("edit script empties '" + std::string(form) + "'");
  return out;
}

std::vector<LexEntry> expand_inflections(const LexEntry& entry, const ParadigmTable& paradigms) {
  auto flx = entry.features.value("FLX");
  if (!flx) return {entry};
  const InflectionParadigm* p = paradigms.find(*flx);
  if (!p) throw InflectionError("entry '" + entry.surface + "': unknown paradigm " + *flx);

  LexEntry base = entry;
  base.features.erase("FLX");
  std::vector<LexEntry> out;
  bool own_reading = false;
  for (const auto& form : p->forms) {
    LexEntry e = base;
    if (form.script.empty() && !own_reading) {
      own_reading = true;
      e.features.merge(form.delta);
      out.insert(out.begin(), std::move(e));
      continue;
    }
    try {
      e.surface = apply_script(form.script, entry.surface);
    } catch (const InflectionError& err) {
      throw InflectionError("entry '" + entry.surface + "', paradigm " + p->id + ": " + err.what());
    }
    e.features.merge(form.delta);
    out.push_back(std::move(e));
  }
  if (!own_reading) out.insert(out.begin(), base);
  return out;
}

std::string Tier::key(std::string_view surface) const {
  return options_.case_sensitive ? std::string(surface) : utf8::lower(surface);
}

std::vector<const LexEntry*> Tier::find(std::string_view surface) const {
  std::vector<const LexEntry*> out;
  auto it = index_.find(key(surface));
  if (it != index_.end())
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

std::vector<const LexEntry*> Tier::by_lemma(std::string_view lemma) const {
  std::vector<const LexEntry*> out;
  auto it = lemma_index_.find(utf8::lower(lemma));
  if (it != lemma_index_.end())
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

bool Tier::contains(const LexEntry& entry) const {
  for (const LexEntry* e : find(entry.surface))
    if (e->surface == entry.surface && e->features == entry.features) return true;
  return false;
}

void Tier::insert(LexEntry entry) {
  entry.tier = name_;
  std::size_t idx = entries_.size();
  if (has_multiword_shape(entry.surface)) {
    auto toks = tokenize(entry.surface);
    if (toks.size() > 1) {
      Multiword mw;
      for (const auto& t : toks) {
        mw.tokens.push_back(key(t.surface));
        mw.spaced.push_back(t.space_before);
      }
      mw.entry = idx;
      multiwords_.push_back(std::move(mw));
    }
  }
  index_[key(entry.surface)].push_back(idx);
  lemma_index_[utf8::lower(entry.lemma)].push_back(idx);
  entries_.push_back(std::move(entry));
}

TierOptions default_tier_options(std::string_view tier) {
  TierOptions o;
  o.case_sensitive = tier == kTierNamedEntities;
  o.transcribe = tier != kTierForeign;
  return o;
}

namespace {

std::vector<Analysis> keep_unamb(std::vector<Analysis> analyses) {
  bool any = std::any_of(analyses.begin(), analyses.end(),
                         [](const Analysis& a) { return a.entry.features.has("UNAMB"); });
  if (any)
    std::erase_if(analyses, [](const Analysis& a) { return !a.entry.features.has("UNAMB"); });
  return analyses;
}

}  // namespace

Lexicon Lexicon::load(const std::vector<TierSource>& sources,
                      std::shared_ptr<const ParadigmTable> paradigms) {
  Lexicon lex;
  lex.paradigms_ = std::move(paradigms);
  for (const auto& src : sources) {
    auto tier = std::make_shared<Tier>(src.name, src.options);
    for (const auto& file : src.files) {
      if (!std::filesystem::exists(file))
        throw ConfigError("missing data file for tier " + src.name + ": " + file.string());
      tier->add_version(read_version_header(file));
      for (const auto& e : read_dictionary(file))
        for (auto& x : expand_inflections(e, *lex.paradigms_)) tier->insert(std::move(x));
    }
    lex.tiers_.push_back(std::move(tier));
  }
  return lex;
}

Lexicon Lexicon::from_entries(
    const std::vector<std::pair<std::string, std::vector<LexEntry>>>& tiers,
    std::shared_ptr<const ParadigmTable> paradigms,
    const std::unordered_map<std::string, TierOptions>& options) {
  Lexicon lex;
  lex.paradigms_ = paradigms ? std::move(paradigms) : std::make_shared<const ParadigmTable>();
  for (const auto& [name, entries] : tiers) {
    auto it = options.find(name);
    auto tier = std::make_shared<Tier>(name, it == options.end() ? default_tier_options(name) : it->second);
    for (const auto& e : entries)
      for (auto& x : expand_inflections(e, *lex.paradigms_)) tier->insert(std::move(x));
    lex.tiers_.push_back(std::move(tier));
  }
  return lex;
}

std::vector<Analysis> Lexicon::lookup(std::string_view surface) const {
  for (const auto& tier : tiers_) {
    auto hits = tier->find(surface);
    if (hits.empty()) continue;
    std::vector<Analysis> out;
    for (const LexEntry* e : hits) out.push_back({*e, tier->name()});
    return keep_unamb(std::move(out));
  }
  return {};
}

std::vector<Analysis> Lexicon::lookup_in(std::string_view tier_name, std::string_view surface) const {
  std::vector<Analysis> out;
  if (const Tier* t = tier(tier_name))
    for (const LexEntry* e : t->find(surface)) out.push_back({*e, t->name()});
  return out;
}

std::optional<MultiwordMatch> Lexicon::match_multiword(const std::vector<Token>& tokens,
                                                       std::size_t pos) const {
  std::optional<MultiwordMatch> best;
  for (const auto& tier : tiers_) {
    std::vector<Analysis> found;
    std::size_t found_len = 0;
    for (const auto& mw : tier->multiwords()) {
      std::size_t n = mw.tokens.size();
      if (pos + n > tokens.size() || n < found_len) continue;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const Token& t = tokens[pos + i];
        ok = tier->key(t.surface) == mw.tokens[i] && (i == 0 || t.space_before == mw.spaced[i]);
      }
      if (!ok) continue;
      if (n > found_len) {
        found.clear();
        found_len = n;
      }
      found.push_back({tier->entries()[mw.entry], tier->name()});
    }
    if (found_len > 0 && (!best || found_len > best->length))
      best = MultiwordMatch{found_len, keep_unamb(std::move(found))};
  }
  return best;
}

std::optional<std::string> Lexicon::inflect(std::string_view lemma, Pos pos,
                                            const std::vector<Trait>& want) const {
  const Tier* modern = tier(kTierModern);
  if (!modern) return std::nullopt;
  const LexEntry* best = nullptr;
  std::size_t best_extra = 0;
  for (const LexEntry* e : modern->by_lemma(lemma)) {
    if (e->features.pos() != pos) continue;
    bool ok = std::all_of(want.begin(), want.end(), [&](const Trait& w) {
      return w.value ? e->features.has_value(w.key, *w.value) : e->features.has(w.key);
    });
    if (!ok) continue;
    std::size_t extra = e->features.traits().size() - want.size();
    if (!best || extra < best_extra) {
      best = e;
      best_extra = extra;
    }
  }
  if (!best) return std::nullopt;
  return best->surface;
}

Lexicon Lexicon::add_entry(std::string_view tier_name, const LexEntry& entry,
                           std::string* warning) const {
  auto it = std::find_if(tiers_.begin(), tiers_.end(),
                         [&](const auto& t) { return t->name() == tier_name; });
  if (it == tiers_.end()) throw Error("unknown tier '" + std::string(tier_name) + "'");
  auto expanded = expand_inflections(entry, *paradigms_);
  bool duplicate = std::all_of(expanded.begin(), expanded.end(),
                               [&](const LexEntry& e) { return (*it)->contains(e); });
  if (duplicate) {
    if (warning) *warning = "duplicate entry ignored: " + serialize_entry(entry);
    return *this;
  }
  auto copy = std::make_shared<Tier>(**it);
  for (auto& e : expanded)
    if (!copy->contains(e)) copy->insert(std::move(e));
  Lexicon next = *this;
  next.tiers_[static_cast<std::size_t>(it - tiers_.begin())] = std::move(copy);
  ++next.version_;
  return next;
}

const Tier* Lexicon::tier(std::string_view name) const {
  for (const auto& t : tiers_)
    if (t->name() == name) return t.get();
  return nullptr;
}

}  // namespace emodeng
