#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cws/dag.hpp"
#include "cws/engine.hpp"
#include "cws/error.hpp"
#include "cws/task.hpp"

/// JSON wire forms shared by the HTTP service and the HTTP client, so both
/// sides serialize every body from one definition. All *_from_json helpers
/// throw cws::Error(BadRequest) on malformed input; unknown fields are
/// ignored everywhere.
namespace cws::wire {

using json = nlohmann::ordered_json;

json file_specs_to_json(const std::vector<FileSpec>& files);
std::vector<FileSpec> file_specs_from_json(const nlohmann::json& doc);

json task_submission_to_json(const TaskSubmission& submission);
TaskSubmission task_submission_from_json(const nlohmann::json& doc);

json granted_to_json(const GrantedResources& granted);
GrantedResources granted_from_json(const nlohmann::json& doc);

json task_status_to_json(const TaskStatus& status);
TaskStatus task_status_from_json(const nlohmann::json& doc);

json vertices_to_json(const std::vector<AbstractVertex>& vertices);
std::vector<AbstractVertex> vertices_from_json(const nlohmann::json& doc);

json vertex_ids_to_json(const std::vector<VertexId>& ids);
std::vector<VertexId> vertex_ids_from_json(const nlohmann::json& doc);

json edges_to_json(const std::vector<DagEdge>& edges);
std::vector<DagEdge> edges_from_json(const nlohmann::json& doc);

json deletion_summary_to_json(const DeletionSummary& summary);
DeletionSummary deletion_summary_from_json(const nlohmann::json& doc);

json error_body(const Error& error);

/// Parses request text, mapping parse failures to BadRequest.
nlohmann::json parse_body(const std::string& text);

}  // namespace cws::wire
