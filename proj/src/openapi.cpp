#include "cws/api.hpp"

#include <nlohmann/json.hpp>

#include "cws/strategies.hpp"

namespace cws {

namespace {

using nlohmann::ordered_json;

ordered_json schema_ref(const char* name) {
  return {{"$ref", std::string("#/components/schemas/") + name}};
}

ordered_json json_response(const char* description, ordered_json schema) {
  return {{"description", description},
          {"content",
           {{"application/json", {{"schema", std::move(schema)}}}}}};
}

ordered_json error_response(const char* description) {
  return json_response(description, schema_ref("Error"));
}

ordered_json path_param(const char* name, const char* description) {
  return {{"name", name},
          {"in", "path"},
          {"required", true},
          {"description", description},
          {"schema", {{"type", "string"}}}};
}

ordered_json base_params() {
  return ordered_json::array(
      {path_param("version", "interface version; only \"v1\" exists"),
       path_param("execution", "execution id, 1..128 chars of [A-Za-z0-9_-]")});
}

ordered_json task_params() {
  auto params = base_params();
  params.push_back(path_param("id", "physical task id"));
  return params;
}

}  // namespace

std::string openapi_document() {
  ordered_json doc;
  doc["openapi"] = "3.0.3";
  doc["info"] = {
      {"title", "Cluster Workflow Scheduler"},
      {"description",
       "Workflow-aware scheduling service: executions carry an abstract task "
       "DAG, physical tasks are submitted against its vertices, and a "
       "pluggable two-phase strategy (prioritization x assignment) places "
       "them onto cluster nodes."},
      {"version", "v1"},
  };

  ordered_json& schemas = doc["components"]["schemas"];
  schemas["Error"] = {
      {"type", "object"},
      {"properties",
       {{"code", {{"type", "string"}}}, {"message", {{"type", "string"}}}}},
      {"required", {"code", "message"}},
  };
  schemas["FileSpec"] = {
      {"type", "object"},
      {"properties",
       {{"path", {{"type", "string"}}},
        {"sizeBytes", {{"type", "integer"}, {"minimum", 0}}}}},
      {"required", {"path", "sizeBytes"}},
  };
  ordered_json strategy_names = ordered_json::array();
  for (const auto& name : StrategyName::all_names()) {
    strategy_names.push_back(name);
  }
  schemas["CreateExecution"] = {
      {"type", "object"},
      {"properties",
       {{"strategy", {{"type", "string"}, {"enum", strategy_names}}},
        {"seed", {{"type", "integer"}}}}},
      {"required", {"strategy"}},
  };
  schemas["ExecutionCreated"] = {
      {"type", "object"},
      {"properties",
       {{"execution", {{"type", "string"}}},
        {"strategy", {{"type", "string"}}}}},
  };
  schemas["DeletionSummary"] = {
      {"type", "object"},
      {"properties",
       {{"finished", {{"type", "integer"}}},
        {"failed", {{"type", "integer"}}},
        {"withdrawn", {{"type", "integer"}}}}},
  };
  schemas["Vertex"] = {
      {"type", "object"},
      {"properties",
       {{"id", {{"type", "string"}}}, {"label", {{"type", "string"}}}}},
      {"required", {"id"}},
  };
  schemas["Edge"] = {
      {"type", "object"},
      {"properties",
       {{"from", {{"type", "string"}}}, {"to", {{"type", "string"}}}}},
      {"required", {"from", "to"}},
  };
  schemas["TaskSubmission"] = {
      {"type", "object"},
      {"properties",
       {{"abstractId", {{"type", "string"}}},
        {"cpus", {{"type", "number"}, {"exclusiveMinimum", 0}}},
        {"memoryBytes", {{"type", "integer"}, {"exclusiveMinimum", 0}}},
        {"runtimeEstimateMs", {{"type", "integer"}, {"minimum", 0}}},
        {"inputFiles", {{"type", "array"}, {"items", schema_ref("FileSpec")}}},
        {"outputFiles",
         {{"type", "array"}, {"items", schema_ref("FileSpec")}}}}},
      {"required", {"abstractId", "cpus", "memoryBytes"}},
  };
  schemas["Granted"] = {
      {"type", "object"},
      {"properties",
       {{"cpus", {{"type", "number"}}},
        {"memoryBytes", {{"type", "integer"}}},
        {"runtimeMs", {{"type", "integer"}}}}},
  };
  schemas["TaskStatus"] = {
      {"type", "object"},
      {"properties",
       {{"state",
         {{"type", "string"},
          {"enum",
           {"SUBMITTED", "QUEUED", "SCHEDULED", "RUNNING", "FINISHED",
            "FAILED", "WITHDRAWN"}}}},
        {"node", {{"type", "string"}}},
        {"submittedAt", {{"type", "integer"}}},
        {"startedAt", {{"type", "integer"}}},
        {"finishedAt", {{"type", "integer"}}}}},
      {"required", {"state", "submittedAt"}},
  };

  ordered_json& paths = doc["paths"];

  ordered_json& execution = paths["/{version}/{execution}"];
  execution["post"] = {
      {"summary", "Register an execution with a scheduling strategy"},
      {"parameters", base_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema", schema_ref("CreateExecution")}}}}}}},
      {"responses",
       {{"200", json_response("registered", schema_ref("ExecutionCreated"))},
        {"400", error_response("UNKNOWN_STRATEGY or INVALID_EXECUTION_ID")},
        {"404", error_response("UNKNOWN_VERSION")},
        {"409", error_response("DUPLICATE_EXECUTION")}}},
  };
  execution["delete"] = {
      {"summary",
       "Delete an execution: running tasks fail, waiting tasks are "
       "withdrawn; responds with the per-outcome tally"},
      {"parameters", base_params()},
      {"responses",
       {{"200", json_response("deleted", schema_ref("DeletionSummary"))},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")}}},
  };

  ordered_json& vertices = paths["/{version}/{execution}/DAG/vertices"];
  vertices["post"] = {
      {"summary", "Add abstract DAG vertices (idempotent upsert)"},
      {"parameters", base_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema",
             {{"type", "array"}, {"items", schema_ref("Vertex")}}}}}}}}},
      {"responses",
       {{"200",
         json_response("count of newly added vertices",
                       ordered_json{{"type", "object"},
                                    {"properties",
                                     {{"added", {{"type", "integer"}}}}}})},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")}}},
  };
  vertices["delete"] = {
      {"summary",
       "Remove vertices and their incident edges (absent ids are no-ops)"},
      {"parameters", base_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema",
             {{"type", "array"},
              {"items", {{"type", "string"}}}}}}}}}}},
      {"responses",
       {{"200",
         json_response("count removed",
                       ordered_json{{"type", "object"},
                                    {"properties",
                                     {{"removed", {{"type", "integer"}}}}}})},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")},
        {"409", error_response("VERTEX_IN_USE")}}},
  };

  ordered_json& edges = paths["/{version}/{execution}/DAG/edges"];
  edges["post"] = {
      {"summary", "Add abstract DAG edges (all-or-nothing)"},
      {"parameters", base_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema",
             {{"type", "array"}, {"items", schema_ref("Edge")}}}}}}}}},
      {"responses",
       {{"200",
         json_response("count of newly added edges",
                       ordered_json{{"type", "object"},
                                    {"properties",
                                     {{"added", {{"type", "integer"}}}}}})},
        {"400", error_response("UNKNOWN_VERTEX")},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")},
        {"409", error_response("WOULD_CREATE_CYCLE")}}},
  };
  edges["delete"] = {
      {"summary", "Remove edges (absent edges are no-ops)"},
      {"parameters", base_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema",
             {{"type", "array"}, {"items", schema_ref("Edge")}}}}}}}}},
      {"responses",
       {{"200",
         json_response("count removed",
                       ordered_json{{"type", "object"},
                                    {"properties",
                                     {{"removed", {{"type", "integer"}}}}}})},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")}}},
  };

  paths["/{version}/{execution}/startBatch"]["put"] = {
      {"summary",
       "Open a submission batch: scheduling of newly submitted tasks is "
       "deferred until the batch closes"},
      {"parameters", base_params()},
      {"responses",
       {{"200", json_response("batch opened",
                              ordered_json{{"type", "object"}})},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")},
        {"409", error_response("BATCH_ALREADY_OPEN")}}},
  };
  paths["/{version}/{execution}/endBatch"]["put"] = {
      {"summary",
       "Close the open batch; held tasks enter scheduling together"},
      {"parameters", base_params()},
      {"responses",
       {{"200", json_response("batch closed",
                              ordered_json{{"type", "object"}})},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")},
        {"409", error_response("NO_BATCH_OPEN")}}},
  };

  ordered_json& task = paths["/{version}/{execution}/task/{id}"];
  task["post"] = {
      {"summary",
       "Submit a physical task against an abstract vertex; the response "
       "reports the cpus, memory, and runtime the scheduler will use"},
      {"parameters", task_params()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json",
           {{"schema", schema_ref("TaskSubmission")}}}}}}},
      {"responses",
       {{"200", json_response("granted resources", schema_ref("Granted"))},
        {"400", error_response("UNKNOWN_ABSTRACT_VERTEX or BAD_REQUEST")},
        {"404", error_response("UNKNOWN_VERSION or UNKNOWN_EXECUTION")},
        {"409", error_response("DUPLICATE_TASK")}}},
  };
  task["get"] = {
      {"summary", "Query a task's state by id"},
      {"parameters", task_params()},
      {"responses",
       {{"200", json_response("task snapshot", schema_ref("TaskStatus"))},
        {"404",
         error_response(
             "UNKNOWN_VERSION, UNKNOWN_EXECUTION, or UNKNOWN_TASK")}}},
  };
  task["delete"] = {
      {"summary", "Withdraw a task that has not started"},
      {"parameters", task_params()},
      {"responses",
       {{"200", json_response("withdrawn", ordered_json{{"type", "object"}})},
        {"404",
         error_response(
             "UNKNOWN_VERSION, UNKNOWN_EXECUTION, or UNKNOWN_TASK")},
        {"409", error_response("TASK_NOT_WITHDRAWABLE")}}},
  };

  return doc.dump(2);
}

}  // namespace cws
