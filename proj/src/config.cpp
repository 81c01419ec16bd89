#include "emodeng/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "emodeng/error.hpp"

namespace emodeng {

namespace {

class ValueParser {
 public:
  ValueParser(std::string_view s, std::size_t line, std::size_t col, const std::string& source)
      : s_(s), line_(line), col0_(col), source_(source) {}

  ConfigValue value() {
    skip();
    if (i_ >= s_.size()) fail("missing value");
    ConfigValue v;
    if (s_[i_] == '"') {
      v = string();
    } else if (s_[i_] == '[') {
      ++i_;
      std::vector<std::string> items;
      skip();
      while (i_ < s_.size() && s_[i_] != ']') {
        if (s_[i_] != '"') fail("arrays hold strings only");
        items.push_back(string());
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          skip();
        } else if (i_ < s_.size() && s_[i_] != ']') {
          fail("expected ',' or ']'");
        }
      }
      if (i_ >= s_.size()) fail("unterminated array");
      ++i_;
      v = std::move(items);
    } else if (s_.compare(i_, 4, "true") == 0) {
      i_ += 4;
      v = true;
    } else if (s_.compare(i_, 5, "false") == 0) {
      i_ += 5;
      v = false;
    } else {
      std::size_t j = i_;
      if (j < s_.size() && (s_[j] == '-' || s_[j] == '+')) ++j;
      std::size_t digits = j;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      if (j == digits) fail("unrecognized value");
      v = std::stoll(std::string(s_.substr(i_, j - i_)));
      i_ = j;
    }
    skip();
    if (i_ < s_.size() && s_[i_] != '#') fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + i_, source_);
  }

  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  std::string string() {
    ++i_;
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        char c = s_[++i_];
        out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
      } else {
        out += s_[i_];
      }
      ++i_;
    }
    if (i_ >= s_.size()) fail("unterminated string");
    ++i_;
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_;
  std::size_t col0_;
  const std::string& source_;
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a '#' comment that is not inside a string.
std::string strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (quoted && s[i] == '\\') {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return std::string(s.substr(0, i));
    }
  }
  return std::string(s);
}

template <typename T>
const T* get(const ConfigTable& t, const std::string& section, const std::string& key,
             const std::string& source) {
  auto s = t.find(section);
  if (s == t.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  if (const T* v = std::get_if<T>(&k->second)) return v;
  throw ConfigError(source + ": [" + section + "] " + key + " has the wrong type");
}

}  // namespace

ConfigTable parse_config_table(std::string_view text, const std::string& source) {
  ConfigTable table;
  std::string section;
  std::set<std::string> seen;
  table[section];
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t indent = raw.find_first_not_of(" \t");
    if (indent == std::string::npos || raw[indent] == '#') continue;
    std::string_view line = std::string_view(raw).substr(indent);
    if (line[0] == '[') {
      std::size_t close = line.find(']');
      if (close == std::string_view::npos)
        throw ParseError("unterminated section header", line_no, indent + 1, source);
      section = trim(line.substr(1, close - 1));
      if (section.empty()) throw ParseError("empty section name", line_no, indent + 2, source);
      if (!seen.insert(section).second)
        throw ParseError("section [" + section + "] defined twice", line_no, indent + 1, source);
      table[section];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key = value", line_no, indent + 1, source);
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no, indent + 1, source);
    std::string value_text = strip_comment(line.substr(eq + 1));
    // Arrays may continue over several lines.
    if (value_text.find('[') != std::string::npos && value_text.find(']') == std::string::npos) {
      std::string more;
      while (std::getline(in, more)) {
        ++line_no;
        more = strip_comment(more);
        value_text += ' ' + more;
        if (more.find(']') != std::string::npos) break;
      }
    }
    ConfigValue v = ValueParser(value_text, line_no, indent + eq + 2, source).value();
    if (!table[section].emplace(key, std::move(v)).second)
      throw ParseError("duplicate key '" + key + "'", line_no, indent + 1, source);
  }
  return table;
}

std::filesystem::path PipelineConfig::user_dictionary() const {
  for (const auto& t : tiers)
    if (t.name == kTierUser && !t.files.empty()) return t.files.front();
  return {};
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& source) {
  ConfigTable t = parse_config_table(text, source);
  PipelineConfig c;
  c.source = source;
  auto path = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : (base_dir / fp).lexically_normal();
  };

  static const std::map<std::string, std::set<std::string>> kKnown{
      {"", {}},
      {"lexicon", {"paradigms", "abbreviations", "order"}},
      {"morph", {"rules", "max_depth"}},
      {"syntax", {"rules", "rewrite_negation"}},
      {"typography", {"long_s", "ampersand", "uv_repair", "ij_repair", "uv_exceptions", "ij_exceptions"}},
      {"store", {"dir"}},
      {"serve", {"addr", "fixtures"}}};
  for (const auto& [section, keys] : t) {
    if (section.rfind("tiers.", 0) == 0) {
      for (const auto& [k, v] : keys)
        if (k != "files" && k != "case_sensitive" && k != "transcribe")
          throw ConfigError(source + ": unknown key [" + section + "] " + k);
      continue;
    }
    auto known = kKnown.find(section);
    if (known == kKnown.end()) throw ConfigError(source + ": unknown section [" + section + "]");
    for (const auto& [k, v] : keys)
      if (!known->second.count(k))
        throw ConfigError(source + ": unknown key [" + section + "] " + k);
  }

  const auto* order = get<std::vector<std::string>>(t, "lexicon", "order", source);
  if (!order || order->empty()) throw ConfigError(source + ": [lexicon] order is required");
  for (const auto& name : *order) {
    std::string section = "tiers." + name;
    if (!t.count(section)) throw ConfigError(source + ": tier '" + name + "' has no [" + section + "]");
    TierSource ts{name, {}, default_tier_options(name)};
    if (const auto* files = get<std::vector<std::string>>(t, section, "files", source))
      for (const auto& f : *files) ts.files.push_back(path(f));
    if (const auto* b = get<bool>(t, section, "case_sensitive", source)) ts.options.case_sensitive = *b;
    if (const auto* b = get<bool>(t, section, "transcribe", source)) ts.options.transcribe = *b;
    c.tiers.push_back(std::move(ts));
  }
  for (const auto& [section, keys] : t)
    if (section.rfind("tiers.", 0) == 0 &&
        std::find(order->begin(), order->end(), section.substr(6)) == order->end())
      throw ConfigError(source + ": [" + section + "] is not listed in [lexicon] order");

  auto required_path = [&](const std::string& section, const std::string& key) {
    const auto* s = get<std::string>(t, section, key, source);
    if (!s) throw ConfigError(source + ": [" + section + "] " + key + " is required");
    return path(*s);
  };
  c.paradigms = required_path("lexicon", "paradigms");
  if (const auto* s = get<std::string>(t, "lexicon", "abbreviations", source)) c.abbreviations = path(*s);
  c.morph_rules = required_path("morph", "rules");
  if (const auto* d = get<long long>(t, "morph", "max_depth", source)) {
    if (*d < 1 || *d > 8) throw ConfigError(source + ": [morph] max_depth must be in 1..8");
    c.max_depth = static_cast<int>(*d);
  }
  c.syntax_rules = required_path("syntax", "rules");
  if (const auto* b = get<bool>(t, "syntax", "rewrite_negation", source)) c.rewrite_negation = *b;

  auto flag = [&](const char* key, bool& out) {
    if (const auto* b = get<bool>(t, "typography", key, source)) out = *b;
  };
  flag("long_s", c.typography.long_s);
  flag("ampersand", c.typography.ampersand);
  flag("uv_repair", c.typography.uv_repair);
  flag("ij_repair", c.typography.ij_repair);
  if (const auto* l = get<std::vector<std::string>>(t, "typography", "uv_exceptions", source))
    c.typography.uv_exceptions = *l;
  if (const auto* l = get<std::vector<std::string>>(t, "typography", "ij_exceptions", source))
    c.typography.ij_exceptions = *l;

  if (const auto* s = get<std::string>(t, "store", "dir", source)) c.store_dir = path(*s);
  if (const auto* s = get<std::string>(t, "serve", "addr", source)) c.addr = *s;
  if (const auto* l = get<std::vector<std::string>>(t, "serve", "fixtures", source))
    for (const auto& f : *l) c.fixtures.push_back(path(f));
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return parse_config(buf.str(), base, path.string());
}

PipelineConfig default_config(const std::filesystem::path& data_dir) {
  PipelineConfig c;
  auto tier = [&](std::string_view name, std::vector<std::string> files) {
    TierSource ts{std::string(name), {}, default_tier_options(name)};
    for (auto& f : files) ts.files.push_back(data_dir / f);
    c.tiers.push_back(std::move(ts));
  };
  tier(kTierXvii, {"xvii.dic"});
  tier(kTierNamedEntities, {"named_entities.dic"});
  tier(kTierForeign, {"foreign.dic"});
  tier(kTierHistorical, {"historical_terms.dic"});
  tier(kTierUser, {"user.dic"});
  tier(kTierModern, {"modern_closed.dic", "modern.dic"});
  c.paradigms = data_dir / "paradigms.txt";
  c.abbreviations = data_dir / "abbreviations.txt";
  c.morph_rules = data_dir / "morph.rules";
  c.syntax_rules = data_dir / "syntax.rules";
  return c;
}

void check_files(const PipelineConfig& c) {
  auto check = [](const std::filesystem::path& p, const char* what) {
    if (!std::filesystem::is_regular_file(p))
      throw ConfigError(std::string("missing ") + what + " file " + p.string());
  };
  for (const auto& t : c.tiers)
    for (const auto& f : t.files)
      if (!(t.name == kTierUser && !std::filesystem::exists(f))) check(f, "dictionary");
  check(c.paradigms, "paradigm");
  if (!c.abbreviations.empty()) check(c.abbreviations, "abbreviation");
  check(c.morph_rules, "morph rules");
  check(c.syntax_rules, "syntax rules");
}

}  // namespace emodeng
