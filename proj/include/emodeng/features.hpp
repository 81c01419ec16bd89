#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emodeng {

// Closed set of category codes used in dictionary lines.
enum class Pos { N, A, V, PRO, ADV, PREP, CONJ, DET };

std::string_view to_string(Pos pos);
std::optional<Pos> parse_pos(std::string_view code);

// `KEY` or `KEY=value`.
struct Trait {
  std::string key;
  std::optional<std::string> value;

  friend bool operator==(const Trait&, const Trait&) = default;
};

// Category code plus an ordered set of traits.  A key appears at most once;
// insertion order is kept so that serialized lines read the way they were
// written.  Equality ignores trait order.
class FeatureSet {
 public:
  explicit FeatureSet(Pos pos = Pos::N) : pos_(pos) {}

  Pos pos() const { return pos_; }
  const std::vector<Trait>& traits() const { return traits_; }

  bool has(std::string_view key) const;
  // Value of a `KEY=value` trait; nullopt when absent or key-only.
  std::optional<std::string> value(std::string_view key) const;
  // True when the trait is present and (if `expected` is given) its value
  // equals it.
  bool has_value(std::string_view key, std::string_view expected) const;

  // Replaces an existing trait in place or appends a new one.
  void set(std::string key, std::optional<std::string> value = std::nullopt);
  void erase(std::string_view key);
  // Applies a feature delta; never touches pos.
  void merge(const std::vector<Trait>& delta);

  // "N+Nb=s+EN=\"spiritual father\"".
  std::string serialize() const;

  friend bool operator==(const FeatureSet& a, const FeatureSet& b);

 private:
  Pos pos_;
  std::vector<Trait> traits_;
};

// True if a trait value has to be double-quoted in the file format.
bool needs_quotes(std::string_view value);

}  // namespace emodeng
