#include "emodeng/candidate_store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "emodeng/error.hpp"

namespace emodeng {

namespace fs = std::filesystem;

namespace {

constexpr const char* kLog = "log.jsonl";
constexpr const char* kSnapshot = "snapshot.json";

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw StoreError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw StoreError("cannot replace " + path.string());
  }
}

nlohmann::json to_json(const CandidateContext& c) {
  return {{"doc", c.doc},
          {"span", {c.span.begin, c.span.end}},
          {"left", c.left},
          {"keyword", c.keyword},
          {"right", c.right}};
}

nlohmann::json to_json(const CandidateEntry& c, bool with_contexts) {
  nlohmann::json j{{"id", c.id},
                   {"surface", c.entry.surface},
                   {"lemma", c.entry.lemma},
                   {"features", c.entry.features.serialize()},
                   {"line", serialize_entry(c.entry)},
                   {"status", to_string(c.status)},
                   {"occurrences", c.contexts.size()},
                   {"decided_by", c.decided_by ? nlohmann::json(*c.decided_by) : nlohmann::json()},
                   {"decided_at", c.decided_at ? nlohmann::json(*c.decided_at) : nlohmann::json()}};
  if (auto en = c.entry.features.value("EN")) j["modern"] = *en;
  if (with_contexts) {
    nlohmann::json ctx = nlohmann::json::array();
    for (const auto& x : c.contexts) ctx.push_back(to_json(x));
    j["contexts"] = std::move(ctx);
  }
  return j;
}

CandidateEntry candidate_from_json(const nlohmann::json& j) {
  CandidateEntry c;
  c.entry = parse_entry_line(j.at("line").get<std::string>());
  c.entry.tier = "user";
  c.id = j.value("id", candidate_id(c.entry));
  if (j.contains("status")) {
    auto s = parse_status(j.at("status").get<std::string>());
    if (!s) throw StoreError("bad status in store record " + c.id);
    c.status = *s;
  }
  if (j.contains("decided_by") && !j["decided_by"].is_null()) c.decided_by = j["decided_by"].get<std::string>();
  if (j.contains("decided_at") && !j["decided_at"].is_null()) c.decided_at = j["decided_at"].get<std::string>();
  if (j.contains("contexts"))
    for (const auto& x : j["contexts"])
      c.contexts.push_back({x.value("doc", ""),
                            {x.at("span").at(0).get<std::size_t>(), x.at("span").at(1).get<std::size_t>()},
                            x.value("left", ""),
                            x.value("keyword", ""),
                            x.value("right", "")});
  return c;
}

void CandidateStore::apply(std::map<std::string, CandidateEntry>& state, const nlohmann::json& ev) {
  const std::string op = ev.at("op").get<std::string>();
  if (op == "record") {
    for (const auto& jc : ev.at("candidates")) {
      CandidateEntry c = candidate_from_json(jc);
      auto [it, inserted] = state.emplace(c.id, c);
      if (inserted) {
        it->second.status = CandidateStatus::Pending;
        it->second.decided_by.reset();
        it->second.decided_at.reset();
        continue;
      }
      for (const auto& x : c.contexts)
        if (std::find(it->second.contexts.begin(), it->second.contexts.end(), x) ==
            it->second.contexts.end())
          it->second.contexts.push_back(x);
    }
  } else if (op == "decide") {
    auto it = state.find(ev.at("id").get<std::string>());
    if (it == state.end()) throw StoreError("log decides unknown id");
    it->second.status = *parse_status(ev.at("status").get<std::string>());
    if (ev.contains("line")) {
      LexEntry e = parse_entry_line(ev.at("line").get<std::string>());
      e.tier = "user";
      it->second.entry = e;
    }
    it->second.decided_by = ev.value("by", "");
    it->second.decided_at = ev.value("at", "");
  } else if (op == "reset") {
    auto it = state.find(ev.at("id").get<std::string>());
    if (it == state.end()) throw StoreError("log resets unknown id");
    it->second.status = CandidateStatus::Pending;
    it->second.decided_by.reset();
    it->second.decided_at.reset();
  } else {
    throw StoreError("unknown log operation '" + op + "'");
  }
}

std::map<std::string, CandidateEntry> CandidateStore::replay(const fs::path& log) {
  std::map<std::string, CandidateEntry> state;
  std::ifstream in(log);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json ev;
    try {
      ev = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      break;  // torn final write
    }
    apply(state, ev);
  }
  return state;
}

CandidateStore CandidateStore::open(const fs::path& dir, bool read_only) {
  CandidateStore s;
  s.dir_ = dir;
  s.read_only_ = read_only;
  std::error_code ec;
  if (!fs::exists(dir)) {
    if (read_only) throw StoreError("store " + dir.string() + " does not exist");
    fs::create_directories(dir, ec);
    if (ec) throw StoreError("cannot create store " + dir.string() + ": " + ec.message());
  }
  try {
    if (fs::exists(dir / kSnapshot)) {
      auto snap = nlohmann::json::parse(read_all(dir / kSnapshot));
      s.seq_ = snap.at("seq").get<std::size_t>();
      for (const auto& jc : snap.at("candidates")) {
        CandidateEntry c = candidate_from_json(jc);
        s.entries_.emplace(c.id, std::move(c));
      }
    }
    std::ifstream in(dir / kLog);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (++n <= s.seq_) continue;
      nlohmann::json ev;
      try {
        ev = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        break;
      }
      apply(s.entries_, ev);
      s.seq_ = n;
    }
  } catch (const nlohmann::json::exception& e) {
    throw StoreError("corrupt store " + dir.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw StoreError("corrupt store " + dir.string() + ": " + e.what());
  }
  return s;
}

void CandidateStore::append(const nlohmann::json& event) {
  if (read_only_) throw StoreError("store is read-only");
  auto next = entries_;
  apply(next, event);
  {
    std::ofstream out(dir_ / kLog, std::ios::app | std::ios::binary);
    if (!out) throw StoreError("cannot append to " + (dir_ / kLog).string());
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw StoreError("write failed: " + (dir_ / kLog).string());
  }
  entries_ = std::move(next);
  ++seq_;
  write_snapshot();
}

void CandidateStore::write_snapshot() const {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& [id, c] : entries_) cands.push_back(to_json(c));
  write_file_atomic(dir_ / kSnapshot, nlohmann::json{{"seq", seq_}, {"candidates", cands}}.dump(1));
}

RecordDelta CandidateStore::record(const std::vector<CandidateEntry>& candidates,
                                   const std::string& run_id) {
  if (read_only_) throw StoreError("store is read-only");
  RecordDelta delta;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : candidates) {
    auto it = entries_.find(c.id);
    if (it == entries_.end()) {
      if (std::find(delta.new_ids.begin(), delta.new_ids.end(), c.id) == delta.new_ids.end())
        delta.new_ids.push_back(c.id);
      delta.new_contexts += c.contexts.size();
    } else {
      for (const auto& x : c.contexts)
        if (std::find(it->second.contexts.begin(), it->second.contexts.end(), x) ==
            it->second.contexts.end())
          ++delta.new_contexts;
    }
    list.push_back(to_json(c));
  }
  if (list.empty()) return delta;
  append({{"op", "record"}, {"run", run_id}, {"candidates", list}});
  return delta;
}

CandidateEntry CandidateStore::decide(const std::string& id, CandidateStatus verdict,
                                      const std::optional<LexEntry>& edited,
                                      const std::string& reviewer,
                                      const fs::path& user_dictionary,
                                      std::optional<std::string> timestamp) {
  if (read_only_) throw StoreError("store is read-only");
  auto it = entries_.find(id);
  if (it == entries_.end()) throw NotFoundError("unknown candidate " + id);
  if (it->second.status != CandidateStatus::Pending)
    throw ConflictError("candidate " + id + " already " + std::string(to_string(it->second.status)));
  if (verdict == CandidateStatus::Pending) throw StoreError("verdict must be accepted or rejected");

  nlohmann::json ev{{"op", "decide"},
                    {"id", id},
                    {"status", to_string(verdict)},
                    {"by", reviewer},
                    {"at", timestamp ? *timestamp : utc_timestamp()}};
  if (edited) ev["line"] = serialize_entry(*edited);

  std::optional<std::string> previous_dict;
  if (verdict == CandidateStatus::Accepted) {
    if (user_dictionary.empty()) throw StoreError("no user dictionary configured");
    const LexEntry& e = edited ? *edited : it->second.entry;
    std::string content;
    if (fs::exists(user_dictionary)) {
      content = read_all(user_dictionary);
      previous_dict = content;
    } else {
      content = "# version: 1\n";
    }
    if (!content.empty() && content.back() != '\n') content += '\n';
    content += serialize_entry(e) + '\n';
    write_file_atomic(user_dictionary, content);
  }
  try {
    append(ev);
  } catch (const StoreError&) {
    if (previous_dict) write_file_atomic(user_dictionary, *previous_dict);
    else if (verdict == CandidateStatus::Accepted) fs::remove(user_dictionary);
    throw;
  }
  return entries_.at(id);
}

CandidateEntry CandidateStore::reset(const std::string& id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw NotFoundError("unknown candidate " + id);
  if (it->second.status != CandidateStatus::Rejected)
    throw ConflictError("only rejected candidates can be reset");
  append({{"op", "reset"}, {"id", id}});
  return entries_.at(id);
}

std::optional<CandidateEntry> CandidateStore::get(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<CandidateEntry> CandidateStore::list(std::optional<CandidateStatus> status) const {
  std::vector<CandidateEntry> out;
  for (const auto& [id, c] : entries_)
    if (!status || c.status == *status) out.push_back(c);
  std::sort(out.begin(), out.end(), [](const CandidateEntry& a, const CandidateEntry& b) {
    if (a.contexts.size() != b.contexts.size()) return a.contexts.size() > b.contexts.size();
    if (a.entry.surface != b.entry.surface) return a.entry.surface < b.entry.surface;
    return a.id < b.id;
  });
  return out;
}

}  // namespace emodeng
