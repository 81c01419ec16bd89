#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "emodeng/candidate_store.hpp"
#include "emodeng/pipeline.hpp"

namespace emodeng {

// "host:port"; a bare port binds 127.0.0.1.  Throws ConfigError.
std::pair<std::string, int> parse_address(const std::string& addr);

// Review API over a candidate store.  Reads take a shared lock on the
// current pipeline and store; decisions and reruns take it exclusively.
class ReviewServer {
 public:
  ReviewServer(Pipeline pipeline, CandidateStore store,
               std::vector<std::filesystem::path> fixtures,
               std::filesystem::path static_dir = {});
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds the socket; port 0 picks a free port.  Returns the bound port.
  // Throws Error when the address is in use.
  int bind(const std::string& host, int port);
  // Serves until stop().  Requires bind().
  void listen();
  void stop();
  // Blocks until the server accepts connections.
  void wait_until_ready() const;

  // Handler bodies, usable without a socket.
  nlohmann::json stats() const;
  nlohmann::json rerun();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emodeng
