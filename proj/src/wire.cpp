#include "cws/wire.hpp"

namespace cws::wire {

namespace {

/// Runs a JSON extraction, converting library type errors into the
/// interface's BAD_REQUEST shape.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadRequest,
                std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

json file_specs_to_json(const std::vector<FileSpec>& files) {
  json arr = json::array();
  for (const auto& f : files) {
    json doc;
    doc["path"] = f.path;
    doc["sizeBytes"] = f.size_bytes;
    arr.push_back(std::move(doc));
  }
  return arr;
}

std::vector<FileSpec> file_specs_from_json(const nlohmann::json& doc) {
  return guarded("file list", [&] {
    std::vector<FileSpec> files;
    for (const auto& item : doc) {
      FileSpec f;
      f.path = item.at("path").get<std::string>();
      f.size_bytes = item.at("sizeBytes").get<std::int64_t>();
      files.push_back(std::move(f));
    }
    return files;
  });
}

json task_submission_to_json(const TaskSubmission& submission) {
  json doc;
  doc["abstractId"] = submission.abstract_id;
  doc["cpus"] = submission.cpus;
  doc["memoryBytes"] = submission.memory_bytes;
  if (submission.runtime_estimate_ms) {
    doc["runtimeEstimateMs"] = *submission.runtime_estimate_ms;
  }
  doc["inputFiles"] = file_specs_to_json(submission.input_files);
  if (!submission.output_files.empty()) {
    doc["outputFiles"] = file_specs_to_json(submission.output_files);
  }
  return doc;
}

TaskSubmission task_submission_from_json(const nlohmann::json& doc) {
  return guarded("task submission", [&] {
    TaskSubmission s;
    s.abstract_id = doc.at("abstractId").get<std::string>();
    s.cpus = doc.at("cpus").get<double>();
    s.memory_bytes = doc.at("memoryBytes").get<std::int64_t>();
    if (doc.contains("runtimeEstimateMs") &&
        !doc.at("runtimeEstimateMs").is_null()) {
      s.runtime_estimate_ms = doc.at("runtimeEstimateMs").get<std::int64_t>();
    }
    if (doc.contains("inputFiles")) {
      s.input_files = file_specs_from_json(doc.at("inputFiles"));
    }
    if (doc.contains("outputFiles")) {
      s.output_files = file_specs_from_json(doc.at("outputFiles"));
    }
    return s;
  });
}

json granted_to_json(const GrantedResources& granted) {
  json doc;
  doc["cpus"] = granted.cpus;
  doc["memoryBytes"] = granted.memory_bytes;
  doc["runtimeMs"] = granted.runtime_ms;
  return doc;
}

GrantedResources granted_from_json(const nlohmann::json& doc) {
  return guarded("grant", [&] {
    GrantedResources g;
    g.cpus = doc.at("cpus").get<double>();
    g.memory_bytes = doc.at("memoryBytes").get<std::int64_t>();
    g.runtime_ms = doc.at("runtimeMs").get<std::int64_t>();
    return g;
  });
}

json task_status_to_json(const TaskStatus& status) {
  json doc;
  doc["state"] = task_state_name(status.state);
  if (status.node) doc["node"] = *status.node;
  doc["submittedAt"] = status.submitted_at;
  if (status.started_at) doc["startedAt"] = *status.started_at;
  if (status.finished_at) doc["finishedAt"] = *status.finished_at;
  return doc;
}

TaskStatus task_status_from_json(const nlohmann::json& doc) {
  return guarded("task status", [&] {
    TaskStatus s;
    s.state = task_state_from_name(doc.at("state").get<std::string>());
    if (doc.contains("node")) s.node = doc.at("node").get<std::string>();
    s.submitted_at = doc.at("submittedAt").get<std::int64_t>();
    if (doc.contains("startedAt")) {
      s.started_at = doc.at("startedAt").get<std::int64_t>();
    }
    if (doc.contains("finishedAt")) {
      s.finished_at = doc.at("finishedAt").get<std::int64_t>();
    }
    return s;
  });
}

json vertices_to_json(const std::vector<AbstractVertex>& vertices) {
  json arr = json::array();
  for (const auto& v : vertices) {
    json doc;
    doc["id"] = v.id;
    doc["label"] = v.label;
    arr.push_back(std::move(doc));
  }
  return arr;
}

std::vector<AbstractVertex> vertices_from_json(const nlohmann::json& doc) {
  return guarded("vertex list", [&] {
    std::vector<AbstractVertex> vertices;
    for (const auto& item : doc) {
      AbstractVertex v;
      v.id = item.at("id").get<std::string>();
      if (item.contains("label")) {
        v.label = item.at("label").get<std::string>();
      }
      vertices.push_back(std::move(v));
    }
    return vertices;
  });
}

json vertex_ids_to_json(const std::vector<VertexId>& ids) {
  return json(ids);
}

std::vector<VertexId> vertex_ids_from_json(const nlohmann::json& doc) {
  return guarded("vertex id list",
                 [&] { return doc.get<std::vector<VertexId>>(); });
}

json edges_to_json(const std::vector<DagEdge>& edges) {
  json arr = json::array();
  for (const auto& [from, to] : edges) {
    json doc;
    doc["from"] = from;
    doc["to"] = to;
    arr.push_back(std::move(doc));
  }
  return arr;
}

std::vector<DagEdge> edges_from_json(const nlohmann::json& doc) {
  return guarded("edge list", [&] {
    std::vector<DagEdge> edges;
    for (const auto& item : doc) {
      edges.emplace_back(item.at("from").get<std::string>(),
                         item.at("to").get<std::string>());
    }
    return edges;
  });
}

json deletion_summary_to_json(const DeletionSummary& summary) {
  json doc;
  doc["finished"] = summary.finished;
  doc["failed"] = summary.failed;
  doc["withdrawn"] = summary.withdrawn;
  return doc;
}

DeletionSummary deletion_summary_from_json(const nlohmann::json& doc) {
  return guarded("deletion summary", [&] {
    DeletionSummary s;
    s.finished = doc.at("finished").get<std::int64_t>();
    s.failed = doc.at("failed").get<std::int64_t>();
    s.withdrawn = doc.at("withdrawn").get<std::int64_t>();
    return s;
  });
}

json error_body(const Error& error) {
  json doc;
  doc["code"] = error.code_name();
  doc["message"] = error.what();
  return doc;
}

nlohmann::json parse_body(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadRequest, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace cws::wire
