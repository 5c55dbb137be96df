#include "cws/api.hpp"

#include <functional>
#include <stdexcept>

#include <httplib.h>

#include "cws/strategies.hpp"
#include "cws/wire.hpp"

namespace cws {

namespace {

using wire::json;

/// The interface version this service speaks. Any other version segment is
/// answered 404 UNKNOWN_VERSION before the execution is even looked at.
constexpr const char* kVersion = "v1";

void require_version(const httplib::Request& req) {
  if (req.path_params.at("version") != kVersion) {
    throw Error(Errc::UnknownVersion,
                "unknown interface version: " + req.path_params.at("version"));
  }
}

std::string exec_param(const httplib::Request& req) {
  return req.path_params.at("execution");
}

std::string task_param(const httplib::Request& req) {
  return req.path_params.at("task");
}

using Handler =
    std::function<json(const httplib::Request&)>;

/// Uniform wrapper: version gate, error-to-status translation, JSON bodies.
auto wrap(Handler handler) {
  return [handler = std::move(handler)](const httplib::Request& req,
                                        httplib::Response& res) {
    try {
      require_version(req);
      const json body = handler(req);
      res.status = 200;
      res.set_content(body.dump(), "application/json");
    } catch (const Error& e) {
      res.status = http_status_for(e.code());
      res.set_content(wire::error_body(e).dump(), "application/json");
    } catch (const std::exception& e) {
      const Error fallback(Errc::BadRequest, e.what());
      res.status = http_status_for(fallback.code());
      res.set_content(wire::error_body(fallback).dump(), "application/json");
    }
  };
}

}  // namespace

int http_status_for(Errc code) {
  switch (code) {
    case Errc::UnknownVersion:
    case Errc::UnknownExecution:
    case Errc::UnknownTask:
      return 404;
    case Errc::DuplicateExecution:
    case Errc::DuplicateTask:
    case Errc::VertexInUse:
    case Errc::WouldCreateCycle:
    case Errc::BatchAlreadyOpen:
    case Errc::NoBatchOpen:
    case Errc::TaskNotWithdrawable:
      return 409;
    default:
      return 400;
  }
}

ApiServer::ApiServer(SchedulerEngine& engine)
    : engine_(engine), server_(std::make_unique<httplib::Server>()) {
  install_routes_();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes_() {
  auto& svr = *server_;

  svr.Get("/v1/openapi.json",
          [](const httplib::Request&, httplib::Response& res) {
            res.status = 200;
            res.set_content(openapi_document(), "application/json");
          });

  // -- execution registry ------------------------------------------------
  svr.Post("/:version/:execution", wrap([this](const httplib::Request& req) {
             const auto body = wire::parse_body(
                 req.body.empty() ? "{}" : req.body);
             if (!body.contains("strategy") ||
                 !body.at("strategy").is_string()) {
               throw Error(Errc::BadRequest,
                           "body must carry a \"strategy\" string");
             }
             std::uint64_t seed = 0;
             if (body.contains("seed") && !body.at("seed").is_null()) {
               if (!body.at("seed").is_number()) {
                 throw Error(Errc::BadRequest, "\"seed\" must be a number");
               }
               seed = body.at("seed").get<std::uint64_t>();
             }
             const std::string canonical = engine_.create_execution(
                 exec_param(req), body.at("strategy").get<std::string>(),
                 seed);
             json out;
             out["execution"] = exec_param(req);
             out["strategy"] = canonical;
             return out;
           }));

  svr.Delete("/:version/:execution",
             wrap([this](const httplib::Request& req) {
               return wire::deletion_summary_to_json(
                   engine_.delete_execution(exec_param(req)));
             }));

  // -- abstract DAG --------------------------------------------------------
  svr.Post("/:version/:execution/DAG/vertices",
           wrap([this](const httplib::Request& req) {
             const auto vertices =
                 wire::vertices_from_json(wire::parse_body(req.body));
             json out;
             out["added"] = engine_.add_vertices(exec_param(req), vertices);
             return out;
           }));

  svr.Delete("/:version/:execution/DAG/vertices",
             wrap([this](const httplib::Request& req) {
               const auto ids =
                   wire::vertex_ids_from_json(wire::parse_body(req.body));
               json out;
               out["removed"] = engine_.remove_vertices(exec_param(req), ids);
               return out;
             }));

  svr.Post("/:version/:execution/DAG/edges",
           wrap([this](const httplib::Request& req) {
             const auto edges =
                 wire::edges_from_json(wire::parse_body(req.body));
             json out;
             out["added"] = engine_.add_edges(exec_param(req), edges);
             return out;
           }));

  svr.Delete("/:version/:execution/DAG/edges",
             wrap([this](const httplib::Request& req) {
               const auto edges =
                   wire::edges_from_json(wire::parse_body(req.body));
               json out;
               out["removed"] = engine_.remove_edges(exec_param(req), edges);
               return out;
             }));

  // -- batching ------------------------------------------------------------
  svr.Put("/:version/:execution/startBatch",
          wrap([this](const httplib::Request& req) {
            engine_.start_batch(exec_param(req));
            json out;
            out["execution"] = exec_param(req);
            out["batch"] = "open";
            return out;
          }));

  svr.Put("/:version/:execution/endBatch",
          wrap([this](const httplib::Request& req) {
            const TimestampMs closed_at = engine_.end_batch(exec_param(req));
            json out;
            out["execution"] = exec_param(req);
            out["batch"] = "closed";
            out["closedAt"] = closed_at;
            return out;
          }));

  // -- tasks -----------------------------------------------------------
  svr.Post("/:version/:execution/task/:task",
           wrap([this](const httplib::Request& req) {
             const auto submission =
                 wire::task_submission_from_json(wire::parse_body(req.body));
             return wire::granted_to_json(engine_.submit_task(
                 exec_param(req), task_param(req), submission));
           }));

  svr.Get("/:version/:execution/task/:task",
          wrap([this](const httplib::Request& req) {
            return wire::task_status_to_json(
                engine_.task_state(exec_param(req), task_param(req)));
          }));

  svr.Delete("/:version/:execution/task/:task",
             wrap([this](const httplib::Request& req) {
               engine_.withdraw_task(exec_param(req), task_param(req));
               json out;
               out["state"] = "WITHDRAWN";
               return out;
             }));
}

bool ApiServer::listen(const std::string& host, int port) {
  port_ = port;
  return server_->listen(host, port);
}

int ApiServer::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ < 0) {
      throw Error(Errc::SchedulerUnreachable, "cannot bind " + host);
    }
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw Error(Errc::SchedulerUnreachable,
                  "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void ApiServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace cws
