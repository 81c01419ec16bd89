#include "emodeng/server.hpp"

#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "httplib.h"

#include "emodeng/error.hpp"

namespace emodeng {

namespace fs = std::filesystem;
using nlohmann::json;

std::pair<std::string, int> parse_address(const std::string& addr) {
  std::string host = "127.0.0.1";
  std::string port = addr;
  if (auto colon = addr.rfind(':'); colon != std::string::npos) {
    host = addr.substr(0, colon);
    port = addr.substr(colon + 1);
  }
  if (host.empty()) host = "127.0.0.1";
  try {
    std::size_t used = 0;
    int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range(port);
    return {host, p};
  } catch (const std::logic_error&) {
    throw ConfigError("bad address '" + addr + "'");
  }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

struct ReviewServer::Impl {
  Impl(Pipeline p, CandidateStore s, std::vector<fs::path> f, fs::path st)
      : pipeline(std::move(p)), store(std::move(s)), fixtures(std::move(f)), static_dir(std::move(st)) {}

  Pipeline pipeline;
  CandidateStore store;
  std::vector<fs::path> fixtures;
  fs::path static_dir;
  mutable std::shared_mutex mu;
  httplib::Server http;
  std::size_t runs = 0;

  // Requires the lock.
  json stats_locked() const {
    Report total;
    json docs = json::array();
    for (const auto& f : fixtures) {
      auto r = pipeline.transcribe(read_text(f), f.filename().string());
      docs.push_back(r.report.to_json());
      total.merge(r.report);
    }
    return {{"lexicon_version", pipeline.lexicon().version()},
            {"aggregate", total.to_json()},
            {"documents", docs}};
  }

  json rerun_locked() {
    std::string run = "run-" + utc_timestamp() + "-" + std::to_string(++runs);
    Report total;
    json docs = json::array();
    std::vector<std::string> new_ids;
    std::size_t new_contexts = 0;
    for (const auto& f : fixtures) {
      auto r = pipeline.transcribe(read_text(f), f.filename().string());
      auto delta = store.record(r.candidates, run);
      new_ids.insert(new_ids.end(), delta.new_ids.begin(), delta.new_ids.end());
      new_contexts += delta.new_contexts;
      docs.push_back(r.report.to_json());
      total.merge(r.report);
    }
    return {{"run", run},
            {"new_ids", new_ids},
            {"new_contexts", new_contexts},
            {"stats",
             {{"lexicon_version", pipeline.lexicon().version()},
              {"aggregate", total.to_json()},
              {"documents", docs}}}};
  }

  void routes() {
    // No SO_REUSEPORT: a second server on a busy port must fail to bind.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      } catch (...) {
        send_error(res, 500, "internal", "unknown error");
      }
    });

    http.Get("/api/candidates", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<CandidateStatus> status = CandidateStatus::Pending;
      if (req.has_param("status")) {
        std::string s = req.get_param_value("status");
        if (s == "all") {
          status.reset();
        } else if (auto st = parse_status(s)) {
          status = st;
        } else {
          return send_error(res, 400, "bad_request", "unknown status '" + s + "'");
        }
      }
      std::shared_lock lock(mu);
      json out = json::array();
      for (const auto& c : store.list(status)) out.push_back(to_json(c, false));
      send_json(res, 200, out);
    });

    http.Get(R"(/api/candidates/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::shared_lock lock(mu);
      auto c = store.get(req.matches[1]);
      if (!c) return send_error(res, 404, "not_found", "unknown candidate " + std::string(req.matches[1]));
      send_json(res, 200, to_json(*c));
    });

    http.Get(R"(/api/candidates/([^/]+)/contexts)", [this](const httplib::Request& req, httplib::Response& res) {
      std::shared_lock lock(mu);
      auto c = store.get(req.matches[1]);
      if (!c) return send_error(res, 404, "not_found", "unknown candidate " + std::string(req.matches[1]));
      json out = json::array();
      for (const auto& x : c->contexts) out.push_back(to_json(x));
      send_json(res, 200, out);
    });

    http.Patch(R"(/api/candidates/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object())
        return send_error(res, 400, "bad_request", "body must be a JSON object");
      if (!body.contains("verdict") || !body["verdict"].is_string())
        return send_error(res, 400, "bad_request", "missing verdict");
      std::string v = body["verdict"].get<std::string>();
      CandidateStatus verdict;
      if (v == "accept" || v == "accepted") verdict = CandidateStatus::Accepted;
      else if (v == "reject" || v == "rejected") verdict = CandidateStatus::Rejected;
      else return send_error(res, 400, "bad_request", "verdict must be accept or reject");
      std::optional<LexEntry> edited;
      if (body.contains("entry") && !body["entry"].is_null()) {
        if (!body["entry"].is_string())
          return send_error(res, 400, "bad_request", "entry must be a dictionary line");
        try {
          edited = parse_entry_line(body["entry"].get<std::string>());
          edited->tier = kTierUser;
        } catch (const ParseError& e) {
          return send_error(res, 400, "bad_entry", e.what());
        }
      }
      std::string reviewer = body.value("reviewer", "");

      std::unique_lock lock(mu);
      try {
        CandidateEntry c = store.decide(req.matches[1], verdict, edited, reviewer,
                                        pipeline.config().user_dictionary());
        if (verdict == CandidateStatus::Accepted)
          pipeline = pipeline.with_lexicon(pipeline.lexicon().add_entry(kTierUser, c.entry));
        send_json(res, 200, to_json(c));
      } catch (const NotFoundError& e) {
        send_error(res, 404, "not_found", e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, "conflict", e.what());
      } catch (const StoreError& e) {
        send_error(res, 500, "store", e.what());
      }
    });

    http.Post(R"(/api/candidates/([^/]+)/reset)", [this](const httplib::Request& req, httplib::Response& res) {
      std::unique_lock lock(mu);
      try {
        send_json(res, 200, to_json(store.reset(req.matches[1])));
      } catch (const NotFoundError& e) {
        send_error(res, 404, "not_found", e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, "conflict", e.what());
      }
    });

    http.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock lock(mu);
      send_json(res, 200, stats_locked());
    });

    http.Post("/api/rerun", [this](const httplib::Request&, httplib::Response& res) {
      std::unique_lock lock(mu);
      try {
        send_json(res, 200, rerun_locked());
      } catch (const StoreError& e) {
        send_error(res, 500, "store", e.what());
      }
    });

    if (!static_dir.empty() && !http.set_mount_point("/", static_dir.string()))
      throw ConfigError("static directory " + static_dir.string() + " does not exist");
  }
};

ReviewServer::ReviewServer(Pipeline pipeline, CandidateStore store, std::vector<fs::path> fixtures,
                           fs::path static_dir)
    : impl_(std::make_unique<Impl>(std::move(pipeline), std::move(store), std::move(fixtures),
                                   std::move(static_dir))) {
  impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int p = impl_->http.bind_to_any_port(host);
    if (p <= 0) throw Error("cannot bind " + host);
    return p;
  }
  if (!impl_->http.bind_to_port(host, port))
    throw Error("cannot bind " + host + ":" + std::to_string(port) + " (address in use?)");
  return port;
}

void ReviewServer::listen() { impl_->http.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void ReviewServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

json ReviewServer::stats() const {
  std::shared_lock lock(impl_->mu);
  return impl_->stats_locked();
}

json ReviewServer::rerun() {
  std::unique_lock lock(impl_->mu);
  return impl_->rerun_locked();
}

}  // namespace emodeng
