#include "cws/http_client.hpp"

#include <httplib.h>

#include "cws/wire.hpp"

namespace cws {

namespace {

/// Percent-encodes one path segment (task and execution ids come from
/// callers and may hold characters with URL meaning).
std::string encode_segment(const std::string& raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : raw) {
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                            c == '.' || c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

nlohmann::json interpret(const httplib::Result& result) {
  if (!result) {
    throw Error(Errc::SchedulerUnreachable,
                "scheduler not reachable: " + httplib::to_string(result.error()));
  }
  if (result->status >= 200 && result->status < 300) {
    return result->body.empty() ? nlohmann::json::object()
                                : wire::parse_body(result->body);
  }
  try {
    const auto body = nlohmann::json::parse(result->body);
    throw Error(errc_from_name(body.at("code").get<std::string>()),
                body.at("message").get<std::string>());
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::BadRequest,
                "HTTP " + std::to_string(result->status) +
                    " without an error body");
  }
}

}  // namespace

HttpClient::HttpClient(const std::string& base_url)
    : http_(std::make_unique<httplib::Client>(base_url)) {
  http_->set_keep_alive(true);
}

HttpClient::~HttpClient() = default;

std::string HttpClient::create_execution(const std::string& exec,
                                         const std::string& strategy,
                                         std::uint64_t seed) {
  wire::json body;
  body["strategy"] = strategy;
  body["seed"] = seed;
  const auto response = interpret(http_->Post(
      "/v1/" + encode_segment(exec), body.dump(), "application/json"));
  return response.at("strategy").get<std::string>();
}

DeletionSummary HttpClient::delete_execution(const std::string& exec) {
  return wire::deletion_summary_from_json(
      interpret(http_->Delete("/v1/" + encode_segment(exec))));
}

std::size_t HttpClient::add_vertices(const std::string& exec,
                                     const std::vector<AbstractVertex>& vs) {
  const auto response = interpret(
      http_->Post("/v1/" + encode_segment(exec) + "/DAG/vertices",
                  wire::vertices_to_json(vs).dump(), "application/json"));
  return response.at("added").get<std::size_t>();
}

std::size_t HttpClient::remove_vertices(const std::string& exec,
                                        const std::vector<VertexId>& ids) {
  const auto response = interpret(
      http_->Delete("/v1/" + encode_segment(exec) + "/DAG/vertices",
                    wire::vertex_ids_to_json(ids).dump(), "application/json"));
  return response.at("removed").get<std::size_t>();
}

std::size_t HttpClient::add_edges(const std::string& exec,
                                  const std::vector<DagEdge>& edges) {
  const auto response = interpret(
      http_->Post("/v1/" + encode_segment(exec) + "/DAG/edges",
                  wire::edges_to_json(edges).dump(), "application/json"));
  return response.at("added").get<std::size_t>();
}

std::size_t HttpClient::remove_edges(const std::string& exec,
                                     const std::vector<DagEdge>& edges) {
  const auto response = interpret(
      http_->Delete("/v1/" + encode_segment(exec) + "/DAG/edges",
                    wire::edges_to_json(edges).dump(), "application/json"));
  return response.at("removed").get<std::size_t>();
}

void HttpClient::start_batch(const std::string& exec) {
  interpret(http_->Put("/v1/" + encode_segment(exec) + "/startBatch", "",
                       "application/json"));
}

void HttpClient::end_batch(const std::string& exec) {
  interpret(http_->Put("/v1/" + encode_segment(exec) + "/endBatch", "",
                       "application/json"));
}

GrantedResources HttpClient::submit_task(const std::string& exec,
                                         const TaskId& id,
                                         const TaskSubmission& submission) {
  return wire::granted_from_json(interpret(http_->Post(
      "/v1/" + encode_segment(exec) + "/task/" + encode_segment(id),
      wire::task_submission_to_json(submission).dump(), "application/json")));
}

TaskStatus HttpClient::task_state(const std::string& exec, const TaskId& id) {
  return wire::task_status_from_json(interpret(http_->Get(
      "/v1/" + encode_segment(exec) + "/task/" + encode_segment(id))));
}

void HttpClient::withdraw_task(const std::string& exec, const TaskId& id) {
  interpret(http_->Delete("/v1/" + encode_segment(exec) + "/task/" +
                          encode_segment(id)));
}

}  // namespace cws
