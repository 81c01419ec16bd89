#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emodeng/lexicon.hpp"
#include "emodeng/tokenizer.hpp"

namespace emodeng {

enum class CandidateStatus { Pending, Accepted, Rejected };

std::string_view to_string(CandidateStatus status);
std::optional<CandidateStatus> parse_status(std::string_view text);

// One occurrence of a candidate surface, with a window of up to five
// tokens on each side.
struct CandidateContext {
  std::string doc;
  Span span;  // original-text bytes
  std::string left;
  std::string keyword;
  std::string right;

  friend bool operator==(const CandidateContext&, const CandidateContext&) = default;
};

struct CandidateEntry {
  std::string id;
  LexEntry entry;
  std::vector<CandidateContext> contexts;
  CandidateStatus status = CandidateStatus::Pending;
  std::optional<std::string> decided_by;
  std::optional<std::string> decided_at;
};

// Stable across runs: FNV-1a 64 of surface, lemma and serialized features.
std::string candidate_id(const LexEntry& entry);

}  // namespace emodeng
