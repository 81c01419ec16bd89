#include "emodeng/candidate.hpp"

#include <cstdint>
#include <cstdio>

namespace emodeng {

std::string_view to_string(CandidateStatus status) {
  switch (status) {
    case CandidateStatus::Pending: return "pending";
    case CandidateStatus::Accepted: return "accepted";
    case CandidateStatus::Rejected: return "rejected";
  }
  return "?";
}

std::optional<CandidateStatus> parse_status(std::string_view text) {
  if (text == "pending") return CandidateStatus::Pending;
  if (text == "accepted") return CandidateStatus::Accepted;
  if (text == "rejected") return CandidateStatus::Rejected;
  return std::nullopt;
}

std::string candidate_id(const LexEntry& entry) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(entry.surface);
  mix("|");
  mix(entry.lemma);
  mix("|");
  mix(entry.features.serialize());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace emodeng
