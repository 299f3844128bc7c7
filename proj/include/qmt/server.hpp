#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "qmt/eval.hpp"

namespace qmt {

struct ServerOptions {
  // 0 binds an OS-assigned free port (used by tests); port() reports it.
  int port = 8080;
  std::string host = "0.0.0.0";
  // Results with more elements than this come back as 413 instead of being
  // truncated, which would silently violate set semantics.
  std::size_t result_cap = 100000;
};

// HTTP front for one immutable model:
//   POST /query      runs a query document; the body may be the XML document
//                    (or a bare expression element), the JSON document (or a
//                    bare JSON string), or a plain-text query, detected from
//                    Content-Type and, failing that, the first byte; the
//                    response uses the same format
//   GET  /health     liveness probe
//   GET  /signature  the installed signature as XML
// Status codes: 200 for evaluated queries (including Undefined outcomes,
// which report outcome=error with a trace), 400 for parse and type errors,
// 404 for unknown routes, 413 when the result exceeds the cap, 500 for
// internal failures.
class QueryServer {
 public:
  QueryServer(std::shared_ptr<const Model> model, ServerOptions options);
  ~QueryServer();
  QueryServer(const QueryServer&) = delete;
  QueryServer& operator=(const QueryServer&) = delete;

  // Binds and serves on a background thread; false when the port is taken.
  bool start();
  // Blocks until stop() is called (the CLI's serving loop).
  void wait();
  void stop();
  // The bound port, once start() succeeded.
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// The QMT_PORT environment variable overrides the command-line port.
int resolve_port(int flag_port);

}  // namespace qmt
