#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emodeng/candidate.hpp"
#include "emodeng/features.hpp"
#include "emodeng/lexicon.hpp"

namespace emodeng {

enum class Anchor { Anywhere, Prefix, Suffix };

// XαY -> XβY.
struct MorphRule {
  std::string id;
  std::string from;
  std::string to;
  Anchor anchor = Anchor::Anywhere;
};

// `id TAB from TAB to TAB anchor` per line; `#` comments.
std::vector<MorphRule> parse_morph_rules(std::string_view text, const std::string& source = {});
std::vector<MorphRule> load_morph_rules(const std::filesystem::path& path);

struct CandidateAnalysis {
  std::string source_surface;
  std::string modern_form;
  std::string lemma;
  FeatureSet features;
  std::vector<std::string> trace;
  int rank = 0;  // derivation depth
};

// Ids of the steps that are not rules-file rules.
inline constexpr std::string_view kOpCollapseDouble = "collapse_double";
inline constexpr std::string_view kOpAppendE = "append_e";
inline constexpr std::string_view kOpFlexEth = "flex_eth";
inline constexpr std::string_view kOpFlexEst = "flex_est";
inline constexpr std::string_view kOpFlexT = "flex_t";

class MorphEngine {
 public:
  explicit MorphEngine(std::vector<MorphRule> rules = {}, int max_depth = 2);

  const std::vector<MorphRule>& rules() const { return rules_; }
  int max_depth() const { return max_depth_; }

  // Breadth-first rewrite search over file rules, orthographic operations
  // and verb flexion analysis, validated against the modern tier.  Sorted
  // by depth, then step order, then lexicon order.
  std::vector<CandidateAnalysis> apply_paradigms(std::string_view token, const Lexicon& lex) const;
  // -(e)th, -(e)st and -t endings of `token` itself.
  std::vector<CandidateAnalysis> verb_flexion_candidates(std::string_view token,
                                                         const Lexicon& lex) const;
  // One orthographic operation (doubled letter, mute e).
  std::vector<CandidateAnalysis> doubled_letter_candidates(std::string_view token,
                                                           const Lexicon& lex) const;
  // Readings of `stem` followed by 'd or 't: stem+ed, stem+d, stem+sed,
  // y -> ied, then the same endings on rewritten stems.
  std::vector<CandidateAnalysis> participle_candidates(std::string_view stem,
                                                       const Lexicon& lex) const;

 private:
  struct Node {
    std::string form;
    std::vector<std::string> trace;
  };
  std::vector<Node> successors(const Node& node) const;

  std::vector<MorphRule> rules_;
  int max_depth_;
};

// Candidates sharing the top-ranked modern form.
std::vector<CandidateAnalysis> top_candidates(const std::vector<CandidateAnalysis>& analyses);

// One pending entry per analysis: surface,lemma,features+EN=lemma+XVII.
std::vector<CandidateEntry> propose_entries(const std::vector<CandidateAnalysis>& analyses);

}  // namespace emodeng
