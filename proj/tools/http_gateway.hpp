#pragma once

#include <memory>
#include <string>

#include "xmrs/session.hpp"

namespace httplib {
class Server;
}

namespace xmrs {

// REST surface over a SessionStore:
//
//   GET   /scenarios
//   POST  /sessions                  {"scenario": label}
//   GET   /sessions/{id}
//   POST  /sessions/{id}/foils       [{"robot", "task", "op"}]
//   PATCH /sessions/{id}/domain      {"site": {...} or "phi[robot]", "value": v}
//   POST  /sessions/{id}/judgment    {"looks_correct": bool}
//   POST  /sessions/{id}/finalize    {"verdict": "declared-correct" | "gave-up"}
//   GET   /sessions/{id}/metrics
//
// Errors map to 400 (bad input), 404 (unknown scenario/session), 409 (closed
// session) and 422 (unsolvable scenario), each with an {"error": text} body.
class HttpGateway {
 public:
  explicit HttpGateway(SessionStore& store);
  ~HttpGateway();

  HttpGateway(const HttpGateway&) = delete;
  HttpGateway& operator=(const HttpGateway&) = delete;

  // Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();

 private:
  void install_routes();

  SessionStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace xmrs
