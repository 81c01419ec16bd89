#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emodeng/features.hpp"
#include "emodeng/tokenizer.hpp"

namespace emodeng {

// Canonical tier names, highest priority first.
inline constexpr std::string_view kTierXvii = "xvii";
inline constexpr std::string_view kTierNamedEntities = "named-entities";
inline constexpr std::string_view kTierForeign = "foreign";
inline constexpr std::string_view kTierHistorical = "historical-terms";
inline constexpr std::string_view kTierUser = "user";
inline constexpr std::string_view kTierModern = "modern";

struct LexEntry {
  std::string surface;
  std::string lemma;
  FeatureSet features;
  std::string tier;

  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

// One dictionary line.  `line_no` and `source` only decorate errors.
LexEntry parse_entry_line(std::string_view line, std::size_t line_no = 1,
                          const std::string& source = {});
// Inverse of parse_entry_line; the lemma field is omitted when it equals
// the surface.
std::string serialize_entry(const LexEntry& entry);

// Every non-comment line of a dictionary file.
std::vector<LexEntry> read_dictionary(const std::filesystem::path& path);
// Value of a leading "# version: ..." header, empty if none.
std::string read_version_header(const std::filesystem::path& path);

struct EditOp {
  std::size_t drop = 0;  // B<n>
  std::string append;
};

struct ParadigmForm {
  std::vector<EditOp> script;
  std::vector<Trait> delta;
};

struct InflectionParadigm {
  std::string id;
  std::vector<ParadigmForm> forms;
};

class ParadigmTable {
 public:
  static ParadigmTable parse(std::string_view text, const std::string& source = {});
  static ParadigmTable load(const std::filesystem::path& path);

  const InflectionParadigm* find(std::string_view id) const;
  void add(InflectionParadigm paradigm);
  std::size_t size() const { return paradigms_.size(); }

 private:
  std::unordered_map<std::string, InflectionParadigm> paradigms_;
};

// Applies an edit script to a form; throws InflectionError on underflow.
std::string apply_script(const std::vector<EditOp>& script, std::string_view form);

// The entry's own reading plus one entry per paradigm form.  The FLX trait
// is consumed.
std::vector<LexEntry> expand_inflections(const LexEntry& entry, const ParadigmTable& paradigms);

struct TierOptions {
  bool case_sensitive = false;
  // EN values of this tier are transcriptions; false when they are glosses.
  bool transcribe = true;
};

struct TierSource {
  std::string name;
  std::vector<std::filesystem::path> files;
  TierOptions options;
};

// One compiled tier.  Immutable once built.
class Tier {
 public:
  Tier(std::string name, TierOptions options) : name_(std::move(name)), options_(options) {}

  const std::string& name() const { return name_; }
  const TierOptions& options() const { return options_; }
  const std::vector<LexEntry>& entries() const { return entries_; }
  const std::vector<std::string>& versions() const { return versions_; }

  // Single-token lookup key for a surface under this tier's case policy.
  std::string key(std::string_view surface) const;
  std::vector<const LexEntry*> find(std::string_view surface) const;
  std::vector<const LexEntry*> by_lemma(std::string_view lemma) const;
  bool contains(const LexEntry& entry) const;

  // Already-expanded entry.
  void insert(LexEntry entry);
  void add_version(std::string version) { versions_.push_back(std::move(version)); }

  struct Multiword {
    std::vector<std::string> tokens;  // lookup keys
    std::vector<bool> spaced;         // whitespace before token i (i > 0)
    std::size_t entry;
  };
  const std::vector<Multiword>& multiwords() const { return multiwords_; }

 private:
  std::string name_;
  TierOptions options_;
  std::vector<LexEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::unordered_map<std::string, std::vector<std::size_t>> lemma_index_;
  std::vector<Multiword> multiwords_;
  std::vector<std::string> versions_;
};

struct Analysis {
  LexEntry entry;
  std::string provenance;  // tier name
};

struct MultiwordMatch {
  std::size_t length = 0;  // tokens covered
  std::vector<Analysis> analyses;
};

// Ordered tiers, highest priority first.  Copies share tiers; add_entry
// copies only the tier it modifies.
class Lexicon {
 public:
  Lexicon() = default;

  static Lexicon load(const std::vector<TierSource>& sources,
                      std::shared_ptr<const ParadigmTable> paradigms);
  // Tiers built from in-memory entries (already parsed, not yet expanded).
  static Lexicon from_entries(
      const std::vector<std::pair<std::string, std::vector<LexEntry>>>& tiers,
      std::shared_ptr<const ParadigmTable> paradigms,
      const std::unordered_map<std::string, TierOptions>& options = {});

  // Entries of the first tier that knows `surface`; UNAMB entries, when
  // present, discard the rest.
  std::vector<Analysis> lookup(std::string_view surface) const;
  // Entries of one tier only.
  std::vector<Analysis> lookup_in(std::string_view tier, std::string_view surface) const;
  // Longest multiword entry starting at tokens[pos].
  std::optional<MultiwordMatch> match_multiword(const std::vector<Token>& tokens,
                                                std::size_t pos) const;

  // Modern-tier form of `lemma` carrying `want`; prefers the entry with
  // the fewest traits beyond `want`.
  std::optional<std::string> inflect(std::string_view lemma, Pos pos,
                                     const std::vector<Trait>& want) const;

  // New snapshot with `entry` (expanded through its FLX code) in `tier`.
  // A duplicate returns an unchanged copy and sets *warning.
  Lexicon add_entry(std::string_view tier, const LexEntry& entry,
                    std::string* warning = nullptr) const;

  const Tier* tier(std::string_view name) const;
  const std::vector<std::shared_ptr<const Tier>>& tiers() const { return tiers_; }
  const ParadigmTable& paradigms() const { return *paradigms_; }
  std::shared_ptr<const ParadigmTable> paradigm_table() const { return paradigms_; }
  std::size_t version() const { return version_; }

 private:
  std::vector<std::shared_ptr<const Tier>> tiers_;
  std::shared_ptr<const ParadigmTable> paradigms_;
  std::size_t version_ = 1;
};

// Default options of the canonical tiers.
TierOptions default_tier_options(std::string_view tier);

}  // namespace emodeng
