#include "emodeng/typography.hpp"

#include <algorithm>
#include <cctype>

#include "emodeng/utf8.hpp"

namespace emodeng {

OffsetMap OffsetMap::identity(std::size_t size) {
  std::vector<std::size_t> table(size + 1);
  for (std::size_t i = 0; i <= size; ++i) table[i] = i;
  return OffsetMap(std::move(table));
}

std::size_t OffsetMap::to_original(std::size_t normalized_offset) const {
  if (normalized_offset >= to_original_.size()) return to_original_.back();
  return to_original_[normalized_offset];
}

namespace {

constexpr char32_t kLongS = 0x017F;
constexpr int kMaxPasses = 16;

// One normalized code point (or substitution) and the original bytes it
// came from.
struct Unit {
  std::string out;
  std::size_t orig_begin;
  std::size_t orig_end;
};

bool unit_is_letter(const Unit& u) {
  return !u.out.empty() && utf8::is_letter(utf8::decode(u.out, 0));
}

// Merged units ("etc.") end in a different class than they start.
bool unit_ends_letter(const Unit& u) {
  if (!u.out.empty() && static_cast<unsigned char>(u.out.back()) < 0x80)
    return std::isalpha(static_cast<unsigned char>(u.out.back())) != 0;
  return unit_is_letter(u);
}

char ascii_lower(const Unit& u) {
  if (u.out.size() != 1) return '\0';
  return static_cast<char>(std::tolower(static_cast<unsigned char>(u.out[0])));
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c) && c != 'y'; }

bool is_upper(const Unit& u) {
  return u.out.size() == 1 && std::isupper(static_cast<unsigned char>(u.out[0]));
}

Unit merged(const Unit& a, const Unit& b, std::string out) {
  return {std::move(out), a.orig_begin, b.orig_end};
}

void replace_long_s(std::vector<Unit>& units) {
  const std::string long_s = utf8::encode(kLongS);
  for (auto& u : units)
    if (u.out == long_s) u.out = "s";
}

void replace_ampersands(std::vector<Unit>& units) {
  std::vector<Unit> out;
  out.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Unit& u = units[i];
    if (u.out != "&") {
      out.push_back(u);
      continue;
    }
    bool prev_letter = !out.empty() && unit_ends_letter(out.back());
    bool next_c = i + 1 < units.size() && ascii_lower(units[i + 1]) == 'c';
    bool c_ends_word = i + 2 >= units.size() || !unit_is_letter(units[i + 2]);
    if (!prev_letter && next_c && c_ends_word) {
      std::size_t last = i + 1;
      if (last + 1 < units.size() && units[last + 1].out == ".") ++last;
      out.push_back(merged(u, units[last], "etc."));
      i = last;
      continue;
    }
    bool next_letter = i + 1 < units.size() && unit_is_letter(units[i + 1]);
    if (!prev_letter && !next_letter) {
      out.push_back({"and", u.orig_begin, u.orig_end});
      continue;
    }
    out.push_back(u);
  }
  units = std::move(out);
}

std::string word_lower(const std::vector<Unit>& units, std::size_t begin, std::size_t end) {
  std::string w;
  for (std::size_t i = begin; i < end; ++i) w += units[i].out;
  return utf8::lower(w);
}

std::string word_text(const std::vector<Unit>& units, std::size_t begin, std::size_t end) {
  std::string w;
  for (std::size_t i = begin; i < end; ++i) w += units[i].out;
  return w;
}

// One pass of the context-sensitive letter repairs.  Decisions are taken on
// the pass input; returns true if anything changed.
bool repair_pass(std::vector<Unit>& units, const TypographyConfig& config) {
  bool changed = false;
  std::vector<Unit> out;
  out.reserve(units.size());
  std::size_t i = 0;
  while (i < units.size()) {
    if (!unit_is_letter(units[i])) {
      out.push_back(units[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < units.size() && unit_is_letter(units[end])) ++end;
    const std::string lw = word_lower(units, i, end);
    const bool uv_ok =
        config.uv_repair && std::find(config.uv_exceptions.begin(), config.uv_exceptions.end(),
                                      lw) == config.uv_exceptions.end();
    const std::string w = word_text(units, i, end);
    const bool ij_ok = config.ij_repair && end - i >= 3 &&
                       std::find(config.ij_exceptions.begin(), config.ij_exceptions.end(), w) ==
                           config.ij_exceptions.end();

    for (std::size_t k = i; k < end; ++k) {
      Unit u = units[k];
      char c = ascii_lower(u);
      char next = k + 1 < end ? ascii_lower(units[k + 1]) : '\0';
      char prev = k > i ? ascii_lower(units[k - 1]) : '\0';
      if (uv_ok && c == 'v' && next == 'v') {
        out.push_back(merged(u, units[k + 1], is_upper(u) ? "W" : "w"));
        ++k;
        changed = true;
        continue;
      }
      if (uv_ok && c == 'v' && k == i && end - i >= 2 && is_consonant(next)) {
        u.out = is_upper(u) ? "U" : "u";
        changed = true;
      } else if (uv_ok && c == 'u' && k > i && k + 1 < end && is_vowel(prev) && is_vowel(next)) {
        u.out = is_upper(u) ? "V" : "v";
        changed = true;
      } else if (ij_ok && k == i && u.out == "I" && units[k + 1].out.size() == 1 &&
                 std::islower(static_cast<unsigned char>(units[k + 1].out[0])) &&
                 (next == 'a' || next == 'e' || next == 'o' || next == 'u')) {
        u.out = "J";
        changed = true;
      }
      out.push_back(std::move(u));
    }
    i = end;
  }
  units = std::move(out);
  return changed;
}

}  // namespace

NormalizedText normalize_chars(std::string_view text, const TypographyConfig& config) {
  std::vector<Unit> units;
  units.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t n = utf8::sequence_length(text, i);
    units.push_back({std::string(text.substr(i, n)), i, i + n});
    i += n;
  }

  if (config.long_s) replace_long_s(units);
  if (config.ampersand) replace_ampersands(units);
  for (int pass = 0; pass < kMaxPasses; ++pass)
    if (!repair_pass(units, config)) break;

  NormalizedText result;
  std::vector<std::size_t> table;
  table.reserve(text.size() + 1);
  for (const auto& u : units) {
    result.text += u.out;
    for (std::size_t b = 0; b < u.out.size(); ++b) table.push_back(u.orig_begin);
  }
  table.push_back(text.size());
  result.offsets = OffsetMap(std::move(table));
  return result;
}

}  // namespace emodeng
