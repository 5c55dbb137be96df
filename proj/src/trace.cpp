#include "cws/trace.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cws/error.hpp"

namespace cws {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<FileSpec> files_from_json(const json& arr, const char* what) {
  std::vector<FileSpec> files;
  if (arr.is_null()) return files;
  if (!arr.is_array()) {
    throw Error(Errc::TraceInvalid, std::string(what) + " must be an array");
  }
  for (const auto& f : arr) {
    FileSpec spec;
    spec.path = f.value("path", std::string{});
    spec.size_bytes = f.value("sizeBytes", std::int64_t{0});
    files.push_back(std::move(spec));
  }
  return files;
}

ordered_json files_to_json(const std::vector<FileSpec>& files) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : files) {
    arr.push_back({{"path", f.path}, {"sizeBytes", f.size_bytes}});
  }
  return arr;
}

std::vector<AbstractVertex> vertices_from_json(const json& arr) {
  std::vector<AbstractVertex> vertices;
  for (const auto& v : arr) {
    AbstractVertex vertex;
    vertex.id = v.value("id", std::string{});
    vertex.label = v.value("label", std::string{});
    vertices.push_back(std::move(vertex));
  }
  return vertices;
}

std::vector<DagEdge> edges_from_json(const json& arr) {
  std::vector<DagEdge> edges;
  for (const auto& e : arr) {
    edges.emplace_back(e.value("from", std::string{}),
                       e.value("to", std::string{}));
  }
  return edges;
}

ordered_json edges_to_json(const std::vector<DagEdge>& edges) {
  ordered_json arr = ordered_json::array();
  for (const auto& [from, to] : edges) {
    arr.push_back({{"from", from}, {"to", to}});
  }
  return arr;
}

}  // namespace

WorkflowTrace WorkflowTrace::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::TraceInvalid,
                std::string("trace is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(Errc::TraceInvalid, "trace must be a JSON object");
  }
  try {
    WorkflowTrace trace;
    trace.name = doc.value("name", std::string{});
    trace.abstract_vertices =
        vertices_from_json(doc.value("abstractVertices", json::array()));
    trace.abstract_edges =
        edges_from_json(doc.value("abstractEdges", json::array()));
    for (const auto& t : doc.value("physicalTasks", json::array())) {
      TraceTask task;
      task.id = t.value("id", std::string{});
      task.abstract_id = t.value("abstractId", std::string{});
      for (const auto& p : t.value("predecessors", json::array())) {
        task.predecessors.push_back(p.get<std::string>());
      }
      task.runtime_ms = t.value("runtimeMs", std::int64_t{0});
      task.cpus = t.value("cpus", 1.0);
      task.memory_bytes = t.value("memoryBytes", std::int64_t{0});
      task.input_files = files_from_json(t.value("inputFiles", json{}), "inputFiles");
      task.output_files =
          files_from_json(t.value("outputFiles", json{}), "outputFiles");
      trace.physical_tasks.push_back(std::move(task));
    }
    for (const auto& e : doc.value("dagEdits", json::array())) {
      TraceDagEdit edit;
      edit.after_task = e.value("afterTask", std::string{});
      edit.add_vertices =
          vertices_from_json(e.value("addVertices", json::array()));
      for (const auto& id : e.value("removeVertices", json::array())) {
        edit.remove_vertices.push_back(id.get<std::string>());
      }
      edit.add_edges = edges_from_json(e.value("addEdges", json::array()));
      edit.remove_edges = edges_from_json(e.value("removeEdges", json::array()));
      trace.dag_edits.push_back(std::move(edit));
    }
    return trace;
  } catch (const json::exception& e) {
    throw Error(Errc::TraceInvalid,
                std::string("trace has a malformed field: ") + e.what());
  }
}

WorkflowTrace WorkflowTrace::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::TraceInvalid, "cannot open trace: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string WorkflowTrace::to_json_text() const {
  ordered_json doc;
  doc["name"] = name;
  ordered_json vertices = ordered_json::array();
  for (const auto& v : abstract_vertices) {
    vertices.push_back({{"id", v.id}, {"label", v.label}});
  }
  doc["abstractVertices"] = vertices;
  doc["abstractEdges"] = edges_to_json(abstract_edges);
  ordered_json tasks = ordered_json::array();
  for (const auto& t : physical_tasks) {
    ordered_json task;
    task["id"] = t.id;
    task["abstractId"] = t.abstract_id;
    task["predecessors"] = t.predecessors;
    task["runtimeMs"] = t.runtime_ms;
    task["cpus"] = t.cpus;
    task["memoryBytes"] = t.memory_bytes;
    task["inputFiles"] = files_to_json(t.input_files);
    task["outputFiles"] = files_to_json(t.output_files);
    tasks.push_back(std::move(task));
  }
  doc["physicalTasks"] = tasks;
  if (!dag_edits.empty()) {
    ordered_json edits = ordered_json::array();
    for (const auto& e : dag_edits) {
      ordered_json edit;
      edit["afterTask"] = e.after_task;
      ordered_json added = ordered_json::array();
      for (const auto& v : e.add_vertices) {
        added.push_back({{"id", v.id}, {"label", v.label}});
      }
      edit["addVertices"] = added;
      edit["removeVertices"] = e.remove_vertices;
      edit["addEdges"] = edges_to_json(e.add_edges);
      edit["removeEdges"] = edges_to_json(e.remove_edges);
      edits.push_back(std::move(edit));
    }
    doc["dagEdits"] = edits;
  }
  return doc.dump(2);
}

void WorkflowTrace::to_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::TraceInvalid, "cannot write trace: " + path);
  out << to_json_text() << '\n';
}

std::vector<std::string> validate_trace(const WorkflowTrace& trace) {
  std::vector<std::string> violations;

  std::set<VertexId> initial_vertices;
  for (const auto& v : trace.abstract_vertices) {
    if (v.id.empty()) violations.push_back("abstract vertex with empty id");
    if (!initial_vertices.insert(v.id).second) {
      violations.push_back("duplicate abstract vertex '" + v.id + "'");
    }
  }

  // vertices that exist at some point: initial ones plus any added by edits
  std::set<VertexId> ever_vertices = initial_vertices;
  for (const auto& e : trace.dag_edits) {
    for (const auto& v : e.add_vertices) ever_vertices.insert(v.id);
  }

  for (const auto& [from, to] : trace.abstract_edges) {
    if (!initial_vertices.count(from) || !initial_vertices.count(to)) {
      violations.push_back("abstract edge " + from + " -> " + to +
                           " references an unknown vertex");
    }
  }

  // initial abstract DAG must be acyclic (same check the scheduler applies)
  {
    AbstractDag dag;
    for (const auto& v : trace.abstract_vertices) dag.add_vertex(v);
    for (const auto& [from, to] : trace.abstract_edges) {
      if (!dag.has_vertex(from) || !dag.has_vertex(to)) continue;
      try {
        dag.add_edge(from, to);
      } catch (const Error& err) {
        if (err.code() == Errc::WouldCreateCycle) {
          violations.push_back("abstract edge " + from + " -> " + to +
                               " creates a cycle");
        }
      }
    }
  }

  std::map<TaskId, const TraceTask*> tasks_by_id;
  for (const auto& t : trace.physical_tasks) {
    if (t.id.empty()) violations.push_back("physical task with empty id");
    if (!tasks_by_id.emplace(t.id, &t).second) {
      violations.push_back("duplicate physical task '" + t.id + "'");
    }
    if (!ever_vertices.count(t.abstract_id)) {
      violations.push_back("task '" + t.id + "' references unknown abstract vertex '" +
                           t.abstract_id + "'");
    }
    if (t.cpus <= 0.0) {
      violations.push_back("task '" + t.id + "' requests non-positive cpus");
    }
    if (t.memory_bytes <= 0) {
      violations.push_back("task '" + t.id + "' requests non-positive memory");
    }
    if (t.runtime_ms < 0) {
      violations.push_back("task '" + t.id + "' has negative runtime");
    }
    for (const auto& f : t.input_files) {
      if (f.size_bytes < 0) {
        violations.push_back("task '" + t.id + "' input file with negative size");
      }
    }
  }

  for (const auto& t : trace.physical_tasks) {
    for (const auto& p : t.predecessors) {
      if (!tasks_by_id.count(p)) {
        violations.push_back("task '" + t.id + "' lists unknown predecessor '" +
                             p + "'");
      }
    }
  }

  // predecessor graph must be acyclic: iteratively peel tasks whose
  // predecessors are all already peeled
  {
    std::set<TaskId> peeled;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& t : trace.physical_tasks) {
        if (peeled.count(t.id)) continue;
        bool ready = true;
        for (const auto& p : t.predecessors) {
          if (tasks_by_id.count(p) && !peeled.count(p)) {
            ready = false;
            break;
          }
        }
        if (ready) {
          peeled.insert(t.id);
          progress = true;
        }
      }
    }
    if (peeled.size() != tasks_by_id.size()) {
      violations.push_back("physical predecessor graph contains a cycle");
    }
  }

  for (const auto& e : trace.dag_edits) {
    if (!tasks_by_id.count(e.after_task)) {
      violations.push_back("dag edit references unknown afterTask '" +
                           e.after_task + "'");
    }
  }

  return violations;
}

}  // namespace cws
