#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "emodeng/candidate.hpp"

namespace emodeng {

nlohmann::json to_json(const CandidateEntry& c, bool with_contexts = true);
nlohmann::json to_json(const CandidateContext& c);
CandidateEntry candidate_from_json(const nlohmann::json& j);

struct RecordDelta {
  std::vector<std::string> new_ids;
  std::size_t new_contexts = 0;
};

// Candidate entries persisted as an append-only JSON-lines log plus a
// snapshot of the state after the first `seq` log lines.  Opening loads the
// snapshot and replays the rest of the log.  Every mutation appends one
// line; the snapshot is rewritten through a temporary file and a rename.
class CandidateStore {
 public:
  // Creates the directory unless read-only.  Throws StoreError.
  static CandidateStore open(const std::filesystem::path& dir, bool read_only = false);
  // State obtained by replaying every line of a log file.
  static std::map<std::string, CandidateEntry> replay(const std::filesystem::path& log);

  bool read_only() const { return read_only_; }
  const std::filesystem::path& dir() const { return dir_; }

  // New ids become pending; known ids gain unseen contexts and keep status.
  RecordDelta record(const std::vector<CandidateEntry>& candidates, const std::string& run_id);
  // Pending -> accepted|rejected.  On accept the (possibly edited) entry
  // is appended to `user_dictionary` before the log line is written.
  CandidateEntry decide(const std::string& id, CandidateStatus verdict,
                        const std::optional<LexEntry>& edited, const std::string& reviewer,
                        const std::filesystem::path& user_dictionary,
                        std::optional<std::string> timestamp = std::nullopt);
  // Rejected -> pending.
  CandidateEntry reset(const std::string& id);

  std::optional<CandidateEntry> get(const std::string& id) const;
  // Occurrence count descending, then surface, then id.
  std::vector<CandidateEntry> list(std::optional<CandidateStatus> status = std::nullopt) const;
  const std::map<std::string, CandidateEntry>& entries() const { return entries_; }
  std::size_t seq() const { return seq_; }

 private:
  CandidateStore() = default;
  void append(const nlohmann::json& event);
  void write_snapshot() const;
  static void apply(std::map<std::string, CandidateEntry>& state, const nlohmann::json& event);

  std::filesystem::path dir_;
  bool read_only_ = false;
  std::map<std::string, CandidateEntry> entries_;
  std::size_t seq_ = 0;
};

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace emodeng
