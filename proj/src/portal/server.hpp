#pragma once

#include <memory>
#include <string>

#include "portal/portal.hpp"

namespace planetary::portal {

// Response headers and request headers understood by the route table.
inline constexpr const char* kHeaderSession = "X-Session";
inline constexpr const char* kHeaderWriteToken = "X-Write-Token";
inline constexpr const char* kHeaderRevision = "X-Revision";

// REST front end over a Portal. Reads use the snapshot current when the
// request starts; mutations require a non-empty, matching write token.
class Server {
 public:
  explicit Server(Portal& portal);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  // Throws Error{BindFailed}.
  int bind(const std::string& host, int port);
  // Serves until stop(); in-flight requests complete before it returns.
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace planetary::portal
