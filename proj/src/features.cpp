#include "emodeng/features.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace emodeng {

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 8> kPosCodes{{
    {Pos::N, "N"},
    {Pos::A, "A"},
    {Pos::V, "V"},
    {Pos::PRO, "PRO"},
    {Pos::ADV, "ADV"},
    {Pos::PREP, "PREP"},
    {Pos::CONJ, "CONJ"},
    {Pos::DET, "DET"},
}};

}  // namespace

std::string_view to_string(Pos pos) {
  for (const auto& [p, code] : kPosCodes)
    if (p == pos) return code;
  return "?";
}

std::optional<Pos> parse_pos(std::string_view code) {
  for (const auto& [p, c] : kPosCodes)
    if (c == code) return p;
  return std::nullopt;
}

bool FeatureSet::has(std::string_view key) const {
  return std::any_of(traits_.begin(), traits_.end(),
                     [&](const Trait& t) { return t.key == key; });
}

std::optional<std::string> FeatureSet::value(std::string_view key) const {
  for (const auto& t : traits_)
    if (t.key == key) return t.value;
  return std::nullopt;
}

bool FeatureSet::has_value(std::string_view key, std::string_view expected) const {
  for (const auto& t : traits_)
    if (t.key == key) return t.value && *t.value == expected;
  return false;
}

void FeatureSet::set(std::string key, std::optional<std::string> value) {
  for (auto& t : traits_) {
    if (t.key == key) {
      t.value = std::move(value);
      return;
    }
  }
  traits_.push_back({std::move(key), std::move(value)});
}

void FeatureSet::erase(std::string_view key) {
  std::erase_if(traits_, [&](const Trait& t) { return t.key == key; });
}

void FeatureSet::merge(const std::vector<Trait>& delta) {
  for (const auto& t : delta) set(t.key, t.value);
}

bool needs_quotes(std::string_view value) {
  return value.empty() || value.find_first_of(" ,+\t") != std::string_view::npos;
}

std::string FeatureSet::serialize() const {
  std::string out(to_string(pos_));
  for (const auto& t : traits_) {
    out += '+';
    out += t.key;
    if (t.value) {
      out += '=';
      if (needs_quotes(*t.value)) {
        out += '"';
        out += *t.value;
        out += '"';
      } else {
        out += *t.value;
      }
    }
  }
  return out;
}

bool operator==(const FeatureSet& a, const FeatureSet& b) {
  if (a.pos_ != b.pos_ || a.traits_.size() != b.traits_.size()) return false;
  return std::all_of(a.traits_.begin(), a.traits_.end(), [&](const Trait& t) {
    return std::find(b.traits_.begin(), b.traits_.end(), t) != b.traits_.end();
  });
}

}  // namespace emodeng
