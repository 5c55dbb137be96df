#pragma once

#include <memory>
#include <string>
#include <thread>

#include "cws/engine.hpp"
#include "cws/error.hpp"

namespace httplib {
class Server;
}

namespace cws {

/// Maps an interface error code to its HTTP status (400, 404, or 409).
int http_status_for(Errc code);

/// The machine-readable API description served at /v1/openapi.json.
std::string openapi_document();

/// The REST face of a SchedulerEngine: eleven operations under
/// /v1/{execution}, JSON bodies both ways, plus the API description
/// document. Handlers run concurrently; the engine serializes them.
class ApiServer {
 public:
  explicit ApiServer(SchedulerEngine& engine);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Serves on host:port in the calling thread. Returns false when the
  /// address cannot be bound.
  bool listen(const std::string& host, int port);

  /// Binds (port 0 = ephemeral), then serves on a background thread.
  /// Returns the bound port. Throws on bind failure.
  int start(const std::string& host = "127.0.0.1", int port = 0);

  /// Stops serving and joins the background thread. Safe to call twice.
  void stop();

  int port() const { return port_; }

 private:
  void install_routes_();

  SchedulerEngine& engine_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace cws
